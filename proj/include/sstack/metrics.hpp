#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sstack/dataset.hpp"
#include "sstack/matrix.hpp"
#include "sstack/stacker.hpp"

namespace sstack {

// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::vector<ClassLabel> classes;
  std::vector<std::size_t> counts;  // K x K row-major

  std::size_t size() const { return classes.size(); }
  std::size_t at(std::size_t t, std::size_t p) const { return counts[t * classes.size() + p]; }
  std::size_t total() const;
  // Each row divided by its sum; empty rows stay zero.
  Matrix normalized() const;
};

ConfusionMatrix confusion(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred,
                          const std::vector<ClassLabel>& classes);

struct ClassMetrics {
  ClassLabel label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool present = false;  // appears as a true or predicted label
};

// Macro averages over present classes.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<ClassMetrics> per_class;
};

MetricsReport metrics(const ConfusionMatrix& cm);

std::string format_report_csv(const MetricsReport& report);
std::string format_report_text(const MetricsReport& report, const ConfusionMatrix& cm);

// Nearest-centroid classifier over per-feature standardized, flattened tensors.
class CentroidModel {
 public:
  struct Example {
    const StackedTensor* tensor;
    ClassLabel label;
  };

  // Classes are ordered by first appearance unless `class_order` is given.
  static CentroidModel fit(std::span<const Example> examples,
                           const std::vector<ClassLabel>& class_order = {});

  ClassLabel predict(const StackedTensor& tensor) const;
  // Squared distance to every centroid, in class order.
  std::vector<double> distances(const StackedTensor& tensor) const;

  const std::vector<ClassLabel>& classes() const { return classes_; }
  std::size_t features() const { return mean_.size(); }

 private:
  std::size_t channels_ = 0, height_ = 0, width_ = 0;
  std::vector<ClassLabel> classes_;
  std::vector<double> mean_;
  std::vector<double> inv_sd_;
  std::vector<std::vector<double>> centroids_;
};

}  // namespace sstack

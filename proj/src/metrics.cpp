#include "sstack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "sstack/error.hpp"
#include "sstack/simd/kernels.hpp"

namespace sstack {

std::size_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Matrix ConfusionMatrix::normalized() const {
  const std::size_t k = classes.size();
  Matrix out(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < k; ++j) row += at(i, j);
    if (row == 0) continue;
    for (std::size_t j = 0; j < k; ++j) out(i, j) = static_cast<double>(at(i, j)) / static_cast<double>(row);
  }
  return out;
}

ConfusionMatrix confusion(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred,
                          const std::vector<ClassLabel>& classes) {
  if (y_true.size() != y_pred.size()) {
    throw Error(Errc::InvalidParameter, "y_true has " + std::to_string(y_true.size()) + " labels, y_pred " +
                                            std::to_string(y_pred.size()));
  }
  std::map<ClassLabel, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!index.emplace(classes[i], i).second) {
      throw Error(Errc::InvalidParameter, "duplicate class '" + classes[i] + "'");
    }
  }
  auto lookup = [&](const ClassLabel& l) {
    auto it = index.find(l);
    if (it == index.end()) throw Error(Errc::UnknownLabel, "label '" + l + "' is not in the class list");
    return it->second;
  };
  ConfusionMatrix cm;
  cm.classes = classes;
  cm.counts.assign(classes.size() * classes.size(), 0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++cm.counts[lookup(y_true[i]) * classes.size() + lookup(y_pred[i])];
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  const std::size_t k = cm.size();
  MetricsReport rep;
  const std::size_t total = cm.total();
  std::size_t diag = 0;
  std::size_t present = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm.at(i, j);
      col += cm.at(j, i);
    }
    const std::size_t tp = cm.at(i, i);
    diag += tp;
    ClassMetrics c;
    c.label = cm.classes[i];
    c.support = row;
    c.present = row > 0 || col > 0;
    c.precision = col ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
    c.recall = row ? static_cast<double>(tp) / static_cast<double>(row) : 0.0;
    c.f1 = (c.precision + c.recall) > 0.0 ? 2.0 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
    if (c.present) {
      ++present;
      rep.precision += c.precision;
      rep.recall += c.recall;
      rep.f1 += c.f1;
    }
    rep.per_class.push_back(c);
  }
  rep.accuracy = total ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
  if (present) {
    rep.precision /= static_cast<double>(present);
    rep.recall /= static_cast<double>(present);
    rep.f1 /= static_cast<double>(present);
  }
  return rep;
}

std::string format_report_csv(const MetricsReport& report) {
  std::ostringstream out;
  char buf[160];
  out << "class,precision,recall,f1,support\n";
  for (const auto& c : report.per_class) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%zu\n", c.label.c_str(), c.precision, c.recall, c.f1,
                  c.support);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "macro,%.6f,%.6f,%.6f,\naccuracy,%.6f,,,\n", report.precision, report.recall,
                report.f1, report.accuracy);
  out << buf;
  return out.str();
}

std::string format_report_text(const MetricsReport& report, const ConfusionMatrix& cm) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "accuracy  %.4f\nprecision %.4f (macro)\nrecall    %.4f (macro)\nf1        %.4f (macro)\n\n",
                report.accuracy, report.precision, report.recall, report.f1);
  out << buf;
  out << "normalized confusion (rows: true, cols: predicted)\n      ";
  for (const auto& c : cm.classes) {
    std::snprintf(buf, sizeof buf, "%7s", c.c_str());
    out << buf;
  }
  out << '\n';
  const Matrix norm = cm.normalized();
  for (std::size_t i = 0; i < cm.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-6s", cm.classes[i].c_str());
    out << buf;
    for (std::size_t j = 0; j < cm.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%7.3f", norm(i, j));
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

CentroidModel CentroidModel::fit(std::span<const Example> examples, const std::vector<ClassLabel>& class_order) {
  if (examples.empty()) throw Error(Errc::InvalidParameter, "centroid fit needs at least one example");
  CentroidModel m;
  const StackedTensor& first = *examples.front().tensor;
  m.channels_ = first.channels;
  m.height_ = first.height;
  m.width_ = first.width;
  const std::size_t n = first.size();
  for (const auto& e : examples) {
    if (e.tensor->channels != m.channels_ || e.tensor->height != m.height_ || e.tensor->width != m.width_) {
      throw Error(Errc::ShapeMismatch, "training tensors do not share one shape");
    }
  }

  m.classes_ = class_order;
  for (const auto& e : examples) {
    if (std::find(m.classes_.begin(), m.classes_.end(), e.label) == m.classes_.end()) {
      if (!class_order.empty()) throw Error(Errc::UnknownLabel, "label '" + e.label + "' not in class order");
      m.classes_.push_back(e.label);
    }
  }

  // Per-feature mean and standard deviation over all training examples.
  m.mean_.assign(n, 0.0);
  for (const auto& e : examples) {
    for (std::size_t i = 0; i < n; ++i) m.mean_[i] += e.tensor->values[i];
  }
  const double count = static_cast<double>(examples.size());
  for (auto& v : m.mean_) v /= count;
  std::vector<double> var(n, 0.0);
  for (const auto& e : examples) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = e.tensor->values[i] - m.mean_[i];
      var[i] += d * d;
    }
  }
  m.inv_sd_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sd = std::sqrt(var[i] / count);
    // Constant features carry no information; zero weight drops them.
    m.inv_sd_[i] = sd > 1e-12 * (1.0 + std::abs(m.mean_[i])) ? 1.0 / sd : 0.0;
  }

  const auto& k = simd::kernels();
  std::vector<std::size_t> members(m.classes_.size(), 0);
  m.centroids_.assign(m.classes_.size(), std::vector<double>(n, 0.0));
  std::vector<double> z(n);
  for (const auto& e : examples) {
    const auto c = static_cast<std::size_t>(std::find(m.classes_.begin(), m.classes_.end(), e.label) -
                                            m.classes_.begin());
    k.standardize(e.tensor->values.data(), m.mean_.data(), m.inv_sd_.data(), z.data(), n);
    auto& centroid = m.centroids_[c];
    for (std::size_t i = 0; i < n; ++i) centroid[i] += z[i];
    ++members[c];
  }
  for (std::size_t c = 0; c < m.classes_.size(); ++c) {
    if (members[c] == 0) {
      throw Error(Errc::InvalidParameter, "class '" + m.classes_[c] + "' has no training examples");
    }
    for (auto& v : m.centroids_[c]) v /= static_cast<double>(members[c]);
  }
  return m;
}

std::vector<double> CentroidModel::distances(const StackedTensor& tensor) const {
  if (tensor.channels != channels_ || tensor.height != height_ || tensor.width != width_) {
    throw Error(Errc::ShapeMismatch, "tensor shape " + std::to_string(tensor.channels) + "x" +
                                         std::to_string(tensor.height) + "x" + std::to_string(tensor.width) +
                                         " differs from the fitted shape");
  }
  const auto& k = simd::kernels();
  std::vector<double> d(classes_.size());
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    d[c] = k.sum_sq_standardized(tensor.values.data(), mean_.data(), inv_sd_.data(), centroids_[c].data(),
                                 mean_.size());
  }
  return d;
}

ClassLabel CentroidModel::predict(const StackedTensor& tensor) const {
  const auto d = distances(tensor);
  // min_element keeps the first of equal distances, i.e. class order breaks ties.
  return classes_[static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin())];
}

}  // namespace sstack

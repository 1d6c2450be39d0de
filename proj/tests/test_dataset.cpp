#include <map>
#include <set>

#include "doctest.h"
#include "sstack/dataset.hpp"
#include "support.hpp"

using namespace sstack;
using testing::error_code;

namespace {

Annotation anno(double t0, double t1, std::string label = "BW", std::string id = "rec") {
  return Annotation{std::move(id), t0, t1, 15.0, 25.0, std::move(label)};
}

// Independent enumeration: every start on a 0.1 s lattice whose window fits
// in the excerpt and fully contains the annotation.
std::pair<double, double> enumerate_starts(const Interval& ex, const Annotation& a, double len) {
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= static_cast<int>(std::lround((ex.end - ex.start) * 10)); ++i) {
    const double s = ex.start + i * 0.1;
    if (s + len > ex.end + 1e-9) break;
    if (s <= a.t_start + 1e-9 && s + len >= a.t_end - 1e-9) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  return {lo, hi};
}

LabeledSample labelled(std::string label, int i) {
  LabeledSample s;
  s.recording_id = label + std::to_string(i);
  s.sample_start = i;
  s.label = std::move(label);
  return s;
}

}  // namespace

TEST_CASE("annotation validation") {
  CHECK_NOTHROW(anno(1, 2).validate());
  CHECK(error_code([] { anno(2, 2).validate(); }) == Errc::Validation);
  CHECK(error_code([] { anno(-1, 2).validate(); }) == Errc::Validation);
  Annotation bad = anno(1, 2);
  bad.f_hi = bad.f_lo;
  CHECK(error_code([&] { bad.validate(); }) == Errc::Validation);
}

TEST_CASE("extract_excerpt centres and clamps") {
  CHECK(extract_excerpt(600, anno(100, 104)) == Interval{87, 117});
  CHECK(extract_excerpt(600, anno(2, 6)) == Interval{0, 30});
  CHECK(extract_excerpt(600, anno(592, 598)) == Interval{570, 600});
  CHECK(extract_excerpt(30, anno(10, 12)) == Interval{0, 30});
  CHECK(error_code([] { extract_excerpt(20, anno(1, 2)); }) == Errc::RecordingTooShort);
}

TEST_CASE("sample_containing draws from the feasible starts") {
  const Interval ex{87, 117};
  const auto a = anno(100, 104);
  CHECK(feasible_starts(ex, a, 10) == Interval{94, 100});
  const auto [elo, ehi] = enumerate_starts(ex, a, 10);
  CHECK(elo == doctest::Approx(94));
  CHECK(ehi == doctest::Approx(100));

  Rng rng(11);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 2000; ++i) {
    const auto s = sample_containing(ex, a, 10, rng);
    CHECK(s.sample_start >= 94);
    CHECK(s.sample_start <= 100);
    CHECK(s.label == "BW");
    CHECK(s.source_annotation == a);
    CHECK(s.rng_seed_used == 11);
    lo = std::min(lo, s.sample_start);
    hi = std::max(hi, s.sample_start);
  }
  CHECK(lo < 94.1);
  CHECK(hi > 99.9);
}

TEST_CASE("exactly 10 s and longer annotations") {
  Rng rng(2);
  const auto exact = anno(50, 60);
  const auto ex1 = extract_excerpt(600, exact);
  for (int i = 0; i < 20; ++i) CHECK(sample_containing(ex1, exact, 10, rng).sample_start == doctest::Approx(50));

  const auto long_a = anno(50, 64);
  const auto ex2 = extract_excerpt(600, long_a);
  CHECK(feasible_starts(ex2, long_a, 10) == Interval{50, 54});
  for (int i = 0; i < 200; ++i) {
    const double s = sample_containing(ex2, long_a, 10, rng).sample_start;
    CHECK(s >= 50);
    CHECK(s <= 54);
  }
}

TEST_CASE("every drawn sample overlaps its annotation") {
  Rng pick(99);
  for (int trial = 0; trial < 500; ++trial) {
    const double len = pick.uniform(0.5, 25);
    const double t0 = pick.uniform(0, 60 - len);
    const auto a = anno(t0, t0 + len);
    const auto ex = extract_excerpt(60, a);
    Rng rng(trial);
    const auto s = sample_containing(ex, a, 10, rng);
    CHECK(s.sample_start >= ex.start - 1e-9);
    CHECK(s.sample_start + 10 <= ex.end + 1e-9);
    CHECK(s.sample_start < a.t_end);
    CHECK(s.sample_start + 10 > a.t_start);
    if (len <= 10 && len <= 30 - 10) {
      CHECK(s.sample_start <= a.t_start + 1e-9);
      CHECK(s.sample_start + 10 >= a.t_end - 1e-9);
    }
  }
}

TEST_CASE("sample_ambient") {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) CHECK(sample_ambient("amb", 10, 10, rng).sample_start == 0.0);

  Rng r2(5);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto s = sample_ambient("amb", 610, 10, r2);
    CHECK(s.sample_start >= 0);
    CHECK(s.sample_start <= 600);
    CHECK(s.label == kAmbientLabel);
    CHECK(!s.source_annotation);
    sum += s.sample_start;
  }
  CHECK(std::abs(sum / 10000 - 300) <= 10);

  Rng a(7), b(7), c(8);
  std::vector<double> xa, xb, xc;
  for (int i = 0; i < 5; ++i) {
    xa.push_back(sample_ambient("x", 100, 10, a).sample_start);
    xb.push_back(sample_ambient("x", 100, 10, b).sample_start);
    xc.push_back(sample_ambient("x", 100, 10, c).sample_start);
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
  CHECK(error_code([&] { sample_ambient("x", 5, 10, a); }) == Errc::RecordingTooShort);
}

TEST_CASE("partition counts use largest remainder with ties to the later partition") {
  const SplitRatios r;
  CHECK(partition_counts(100, r) == std::array<std::size_t, 3>{70, 15, 15});
  CHECK(partition_counts(10, r) == std::array<std::size_t, 3>{7, 1, 2});
  CHECK(partition_counts(0, r) == std::array<std::size_t, 3>{0, 0, 0});
  CHECK(partition_counts(1, r) == std::array<std::size_t, 3>{1, 0, 0});
  for (std::size_t n = 0; n < 300; ++n) {
    const auto c = partition_counts(n, r);
    CHECK(c[0] + c[1] + c[2] == n);
    CHECK(std::abs(static_cast<double>(c[0]) - 0.7 * n) < 1.0);
    CHECK(std::abs(static_cast<double>(c[1]) - 0.15 * n) < 1.0);
    CHECK(std::abs(static_cast<double>(c[2]) - 0.15 * n) < 1.0);
  }
  CHECK(error_code([] { partition_counts(5, SplitRatios{0.5, 0.5, 0.5}); }) == Errc::InvalidParameter);
  CHECK(error_code([] { partition_counts(5, SplitRatios{1.2, -0.1, -0.1}); }) == Errc::InvalidParameter);
}

TEST_CASE("split_dataset: stratified, disjoint, exhaustive") {
  std::vector<LabeledSample> all;
  for (int i = 0; i < 100; ++i) all.push_back(labelled("BW", i));
  {
    Rng rng(3);
    const auto s = split_dataset(all, SplitRatios{}, rng);
    CHECK(s.train.size() == 70);
    CHECK(s.val.size() == 15);
    CHECK(s.test.size() == 15);
  }
  for (int i = 0; i < 37; ++i) all.push_back(labelled("SW", i));
  for (int i = 0; i < 137; ++i) all.push_back(labelled("AB", i));
  Rng rng(4);
  const auto s = split_dataset(all, SplitRatios{}, rng);
  std::set<std::string> seen;
  std::map<std::string, std::array<std::size_t, 3>> per;
  const std::vector<LabeledSample>* parts[] = {&s.train, &s.val, &s.test};
  for (int p = 0; p < 3; ++p) {
    for (const auto& x : *parts[p]) {
      CHECK(seen.insert(x.recording_id).second);
      ++per[x.label][p];
    }
  }
  CHECK(seen.size() == all.size());
  for (const auto& [label, c] : per) {
    const double n = static_cast<double>(c[0] + c[1] + c[2]);
    CHECK(std::abs(c[0] - 0.7 * n) <= 1.0);
    CHECK(std::abs(c[1] - 0.15 * n) <= 1.0);
    CHECK(std::abs(c[2] - 0.15 * n) <= 1.0);
  }
  // Half the input is AB, so each partition is exactly half AB.
  for (int p = 0; p < 3; ++p) {
    const double frac = static_cast<double>(per["AB"][p]) / parts[p]->size();
    CHECK(frac == doctest::Approx(0.5));
  }
}

TEST_CASE("split_dataset: empty input and unstratified mode") {
  Rng rng(1);
  const auto empty = split_dataset({}, SplitRatios{}, rng);
  CHECK(empty.size() == 0);
  std::vector<LabeledSample> all;
  for (int i = 0; i < 20; ++i) all.push_back(labelled(i % 2 ? "A" : "B", i));
  const auto s = split_dataset(all, SplitRatios{}, rng, false);
  CHECK(s.train.size() == 14);
  CHECK(s.val.size() == 3);
  CHECK(s.test.size() == 3);
  CHECK(!s.stratified);
}

TEST_CASE("split_dataset is deterministic in the seed") {
  std::vector<LabeledSample> all;
  for (int i = 0; i < 50; ++i) all.push_back(labelled(i % 3 ? "X" : "Y", i));
  Rng a(9), b(9), c(10);
  CHECK(split_dataset(all, SplitRatios{}, a) == split_dataset(all, SplitRatios{}, b));
  CHECK(!(split_dataset(all, SplitRatios{}, a) == split_dataset(all, SplitRatios{}, c)));
}

TEST_CASE("derived seeds make sampling order-independent") {
  std::vector<SampleSource> sources;
  for (int i = 0; i < 20; ++i) {
    const std::string id = "r" + std::to_string(i);
    if (i % 4 == 0) sources.push_back({id, 120.0, std::nullopt, 0});
    else sources.push_back({id, 120.0, anno(10.0 * (i % 9), 10.0 * (i % 9) + 3, "FW", id), 0});
  }
  std::vector<LabeledSample> forward, backward(sources.size());
  for (const auto& s : sources) forward.push_back(draw_sample(s, 77, 10, 30));
  for (std::size_t i = sources.size(); i-- > 0;) backward[i] = draw_sample(sources[i], 77, 10, 30);
  CHECK(forward == backward);
  CHECK(forward[1].rng_seed_used == derive_seed(77, "r1", 0));
  CHECK(derive_seed(77, "r1", 0) != derive_seed(77, "r1", 1));
  CHECK(derive_seed(77, "r1", 0) != derive_seed(78, "r1", 0));
  CHECK(derive_seed(77, "r1", 0) != derive_seed(77, "r2", 0));

  const EpochSampler sampler(sources, 77);
  CHECK(sampler.epoch(0) == forward);
  CHECK(sampler.epoch(3) == sampler.epoch(3));
  CHECK(!(sampler.epoch(1) == sampler.epoch(2)));
}

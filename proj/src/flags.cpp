#include "srvol/flags.hpp"

#include <random>

#include "srvol/errors.hpp"
#include "srvol/linalg.hpp"

namespace srvol {

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::Regular: return "Regular";
    case PointClass::Singular: return "Singular";
    default: return "Undetermined";
  }
}

std::vector<int> weights_from_growth(const std::vector<int>& growth) {
  std::vector<int> w;
  int prev = 0;
  for (std::size_t i = 0; i < growth.size(); ++i) {
    for (int j = prev; j < growth[i]; ++j) w.push_back(static_cast<int>(i + 1));
    prev = std::max(prev, growth[i]);
  }
  return w;
}

int homogeneous_dimension(const std::vector<int>& growth) {
  int Q = 0, prev = 0;
  for (std::size_t i = 0; i < growth.size(); ++i) {
    Q += static_cast<int>(i + 1) * (growth[i] - prev);
    prev = growth[i];
  }
  return Q;
}

FlagReport flag_at(const StructureModel& model, const RationalPoint& q, int Lmax) {
  if (Lmax < 1) throw InputError("InvalidCap", "bracket depth must be at least 1");
  if (q.size() != model.n) throw DimensionMismatch("point has " + std::to_string(q.size()) + " coordinates, expected " +
                                                   std::to_string(model.n));
  const auto& table = model.brackets();
  FlagReport rep;
  rep.point = q;
  Echelon span(model.n);
  for (int len = 1; len <= Lmax; ++len) {
    for (const auto& I : table.nonzero_of_length(len)) {
      if (span.rank() == model.n) break;
      span.add(table.bracket_of(I).eval(q));
    }
    rep.growth.push_back(static_cast<int>(span.rank()));
    if (span.rank() == model.n) break;
  }
  if (span.rank() < model.n) throw NotBracketGeneratingAtDepth(Lmax, point_to_string(q));
  rep.r = static_cast<int>(rep.growth.size());
  rep.weights = weights_from_growth(rep.growth);
  rep.Q = homogeneous_dimension(rep.growth);
  return rep;
}

FlagReport flag_at(const StructureModel& model, const RationalPoint& q) { return flag_at(model, q, model.depth_cap()); }

RationalPoint random_rational_point(const RationalPoint& center, const Rational& radius, std::uint64_t& state) {
  std::mt19937_64 rng(state);
  RationalPoint p;
  p.reserve(center.size());
  for (const auto& c : center) {
    auto k = static_cast<long>(rng() % 2049) - 1024;
    Rational off(k, 1024);
    p.push_back(c + radius * off);
  }
  state = rng();
  for (auto& x : p) x.canonicalize();
  return p;
}

FlagReport classify_point(const StructureModel& model, const RationalPoint& q, int Lmax, const Rational& probe_radius,
                          int probe_count, std::uint64_t seed) {
  if (probe_count < 1) throw InputError("InvalidProbeCount", "probe_count must be at least 1");
  FlagReport rep = flag_at(model, q, Lmax);
  rep.classification = PointClass::Regular;
  std::uint64_t state = seed;
  for (int i = 0; i < probe_count; ++i) {
    RationalPoint probe = random_rational_point(q, probe_radius, state);
    FlagReport other = flag_at(model, probe, Lmax);
    rep.probes.push_back(probe);
    if (other.growth != rep.growth) rep.classification = PointClass::Singular;
  }
  return rep;
}

QRegResult q_reg(const StructureModel& model, const SampleSpec& spec) {
  RationalPoint center = spec.center.empty() ? RationalPoint(model.n, 0) : spec.center;
  std::uint64_t state = spec.seed;
  QRegResult res;
  std::vector<int> seen;
  for (int i = 0; i < spec.count; ++i) {
    RationalPoint q = random_rational_point(center, spec.radius, state);
    FlagReport rep = classify_point(model, q, model.depth_cap(), spec.probe_radius, spec.probe_count, state ^ 0x9e37u);
    if (rep.classification != PointClass::Regular) continue;
    ++res.regular_samples;
    seen.push_back(rep.Q);
    res.Q_R = std::max(res.Q_R, rep.Q);
  }
  if (res.regular_samples == 0) throw NoRegularPointFound("no regular point among " + std::to_string(spec.count) + " samples");
  for (int Q : seen)
    if (Q != seen.front()) res.constant = false;
  if (!res.constant) res.warnings.push_back("Q is not constant over sampled regular points");
  return res;
}

namespace {
int mobius(int d) {
  int result = 1;
  for (int p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    d /= p;
    if (d % p == 0) return 0;
    result = -result;
  }
  if (d > 1) result = -result;
  return result;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}
}  // namespace

std::int64_t free_lie_dims(int m, int s) {
  if (m < 1 || s < 1) throw InputError("InvalidArgument", "free_lie_dims needs m >= 1 and s >= 1");
  std::int64_t total = 0;
  for (int j = 1; j <= s; ++j) {
    std::int64_t sum = 0;
    for (int d = 1; d <= j; ++d)
      if (j % d == 0) sum += mobius(d) * ipow(m, j / d);
    total += sum / j;
  }
  return total;
}

}  // namespace srvol

#include "srvol/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "srvol/errors.hpp"
#include "srvol/flags.hpp"
#include "srvol/random.hpp"

namespace srvol {

namespace {

struct TermsLess {
  bool operator()(const Polynomial& a, const Polynomial& b) const { return a.terms() < b.terms(); }
};
struct FieldLess {
  bool operator()(const VectorField& a, const VectorField& b) const {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (a[j].terms() != b[j].terms()) return a[j].terms() < b[j].terms();
    }
    return false;
  }
};

struct Bracket {
  MultiIndex index;
  VectorField field;
  int length;
};

// Nonzero brackets of length <= max_len, deduplicated up to sign, by length then lexicographically.
std::vector<Bracket> distinct_brackets(const StructureModel& model, int max_len, PruningLog* log) {
  const auto& table = model.brackets();
  std::vector<Bracket> out;
  std::set<VectorField, FieldLess> seen;
  for (int len = 1; len <= max_len; ++len) {
    auto nonzero = table.nonzero_of_length(len);
    if (log) {
      double total = std::pow(static_cast<double>(model.m()), len);
      log->brackets_enumerated += static_cast<std::size_t>(total);
      log->zero_brackets += static_cast<std::size_t>(total) - nonzero.size();
    }
    for (const auto& I : nonzero) {
      VectorField X = table.bracket_of(I);
      if (seen.count(X) || seen.count(-X)) {
        if (log) ++log->duplicate_brackets;
        continue;
      }
      seen.insert(X);
      out.push_back({I, std::move(X), len});
    }
  }
  return out;
}

// Visits index combinations i_1 < ... < i_n with sum of lengths equal to target.
// Returns false when the visitor asked to stop.
bool visit_tuples(const std::vector<Bracket>& b, std::size_t n, int target,
                  const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> cur;
  std::function<bool(std::size_t, int)> rec = [&](std::size_t start, int sum) -> bool {
    if (cur.size() == n) return sum == target ? visit(cur) : true;
    std::size_t left = n - cur.size();
    for (std::size_t i = start; i + left <= b.size(); ++i) {
      // lengths are nondecreasing, so every remaining slot costs at least b[i].length
      if (sum + static_cast<int>(left) * b[i].length > target) break;
      cur.push_back(i);
      bool go = rec(i + 1, sum + b[i].length);
      cur.pop_back();
      if (!go) return false;
    }
    return true;
  };
  return rec(0, 0);
}

std::size_t count_tuples(const std::vector<Bracket>& b, std::size_t n, int target, std::size_t cap) {
  std::size_t count = 0;
  visit_tuples(b, n, target, [&](const std::vector<std::size_t>&) { return ++count <= cap; });
  return count;
}

RationalPoint sample_parameter(const SubmanifoldChart& N, const RationalPoint& center, const Rational& radius,
                               std::uint64_t& state) {
  RationalPoint u = random_rational_point(center, radius, state);
  for (std::size_t l = 0; l < u.size(); ++l) u[l] = std::clamp(u[l], N.domain[l].first, N.domain[l].second);
  return u;
}

std::vector<std::vector<RationalPoint>> nested_samples(const SubmanifoldChart& N, const RationalPoint& p,
                                                        int sample_count, std::uint64_t seed) {
  auto u0 = N.parameter_of(p);
  bool inside = u0.has_value();
  for (std::size_t l = 0; inside && l < u0->size(); ++l)
    inside = N.domain[l].first <= (*u0)[l] && (*u0)[l] <= N.domain[l].second;
  if (!inside) throw InputError("PointNotOnStratum", point_to_string(p) + " is not on " + N.label);
  Rational width = N.domain.empty() ? Rational(1) : N.domain[0].second - N.domain[0].first;
  for (const auto& [lo, hi] : N.domain) width = std::min(width, Rational(hi - lo));
  Rational radius = width / 8;
  std::vector<std::vector<RationalPoint>> boxes;
  std::uint64_t state = seed;
  for (int box = 0; box < 3; ++box) {
    std::vector<RationalPoint> pts{p};
    for (int i = 0; i < sample_count; ++i) pts.push_back(N.point(sample_parameter(N, *u0, radius, state)));
    boxes.push_back(std::move(pts));
    radius /= 2;
  }
  return boxes;
}

bool less_order(const Order& a, const Order& b) {
  if (a.value != b.value) return a.value < b.value;
  return !a.at_least && b.at_least;
}

OrderSearch search_orders(const std::vector<std::vector<RationalPoint>>& boxes,
                          const std::function<Order(const RationalPoint&)>& order_at) {
  OrderSearch out;
  for (const auto& pts : boxes) {
    std::optional<Order> best;
    for (const auto& q : pts) {
      Order o = order_at(q);
      if (!best || less_order(o, *best)) best = o;
    }
    out.per_box.push_back(*best);
    for (const auto& q : pts) out.points.push_back(q);
  }
  out.value = out.per_box.back();
  const auto& a = out.per_box[out.per_box.size() - 2];
  out.stabilized = a.value == out.value.value && a.at_least == out.value.at_least;
  return out;
}

double fit_sigma(double ssr, std::size_t count, double sxx) {
  if (count <= 2 || sxx <= 0) return 0;
  return std::sqrt(ssr / static_cast<double>(count - 2) / sxx);
}

}  // namespace

TupleFamily enumerate_family(const StructureModel& model, int Q_R) {
  const std::size_t n = model.n;
  if (Q_R < static_cast<int>(n)) throw InputError("InvalidArgument", "Q_R must be at least n");
  TupleFamily F;
  F.Q_R = Q_R;
  auto brackets = distinct_brackets(model, Q_R - static_cast<int>(n) + 1, &F.log);
  std::size_t count = count_tuples(brackets, n, Q_R, model.tuple_budget);
  if (count > model.tuple_budget) {
    throw CombinatorialBudgetExceeded("more than " + std::to_string(model.tuple_budget) + " tuples with total length " +
                                      std::to_string(Q_R) + "; raise the tuple budget or lower the depth");
  }
  F.log.tuples_enumerated = count;

  std::set<Polynomial, TermsLess> seen;
  visit_tuples(brackets, n, Q_R, [&](const std::vector<std::size_t>& idx) {
    PolyMatrix m(n, std::vector<Polynomial>(n));
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) m[r][c] = brackets[idx[c]].field[r];
    Polynomial det = determinant(m);
    if (det.is_zero()) {
      ++F.log.zero_determinants;
      return true;
    }
    det = model.volume_density * det;
    Polynomial key = det.leading_coefficient() < 0 ? -det : det;
    if (!seen.insert(key).second) {
      ++F.log.duplicate_determinants;
      return true;
    }
    DetPolynomial d;
    for (auto i : idx) d.tuple.push_back(brackets[i].index);
    d.poly = std::move(det);
    F.dets.push_back(std::move(d));
    return true;
  });
  for (const auto& d : F.dets) F.compiled.emplace_back(d.poly);
  return F;
}

double nu(const TupleFamily& F, std::span<const double> q) {
  if (F.dets.empty()) throw InputError("EmptyFamily", "the tuple family is empty");
  double s = 0;
  for (const auto& d : F.compiled) {
    double v = d(q);
    s += v * v;
  }
  return std::sqrt(s);
}

double nu_bar(const TupleFamily& F, std::span<const double> q) {
  if (F.dets.empty()) throw InputError("EmptyFamily", "the tuple family is empty");
  double best = 0;
  for (const auto& d : F.compiled) best = std::max(best, std::abs(d(q)));
  return best;
}

Polynomial nu_squared(const TupleFamily& F) {
  if (F.dets.empty()) throw InputError("EmptyFamily", "the tuple family is empty");
  Polynomial s(F.dets.front().poly.nvars());
  for (const auto& d : F.dets) s += d.poly * d.poly;
  return s;
}

double nu_bar_submanifold(const StructureModel& model, const SubmanifoldChart& N, const Polynomial& varpi_density,
                          const RationalPoint& q) {
  auto aligned = N.aligned_coordinates();
  if (!aligned) throw UnsupportedStratumShape(N.label + " is not a coordinate subspace");
  if (!N.parameter_of(q)) throw InputError("PointNotOnStratum", point_to_string(q) + " is not on " + N.label);
  const std::size_t n = model.n;
  const std::size_t k = aligned->size();
  std::vector<std::size_t> normal;
  for (std::size_t j = 0; j < n; ++j)
    if (std::find(aligned->begin(), aligned->end(), j) == aligned->end()) normal.push_back(j);

  int Qq = flag_at(model, q).Q;
  auto brackets = distinct_brackets(model, Qq - static_cast<int>(n) + 1, nullptr);
  if (count_tuples(brackets, n, Qq, model.tuple_budget) > model.tuple_budget)
    throw CombinatorialBudgetExceeded("tuple enumeration at Q(q) = " + std::to_string(Qq));
  std::vector<RationalPoint> values;
  for (const auto& b : brackets) values.push_back(b.field.eval(q));

  auto block_det = [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    if (rows.empty()) return Rational(1);
    RationalMatrix m(rows.size(), RationalPoint(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c) m[r][c] = values[cols[c]][rows[r]];
    return determinant(m);
  };
  std::vector<std::size_t> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = j;

  Rational best_omega = 0;
  std::vector<std::vector<std::size_t>> argmax;
  visit_tuples(brackets, n, Qq, [&](const std::vector<std::size_t>& idx) {
    Rational v = abs(block_det(all, idx));
    if (v > best_omega) {
      best_omega = v;
      argmax.clear();
    }
    if (v != 0 && v == best_omega) argmax.push_back(idx);
    return true;
  });

  Rational density = varpi_density.eval(q);
  Rational best = 0;
  for (const auto& idx : argmax) {
    // every choice of k tangent columns, the remaining n - k are transverse
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<std::size_t> tan, tr;
      for (std::size_t c = 0; c < n; ++c) (pick[c] ? tan : tr).push_back(idx[c]);
      Rational v = abs(density * block_det(*aligned, tan) * block_det(normal, tr));
      best = std::max(best, v);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return best.get_d();
}

OrderSearch rho_min(const StructureModel& model, const TupleFamily& F, const RationalPoint& p,
                    const SubmanifoldChart& N, int sample_count, std::uint64_t seed, int s_max) {
  if (F.dets.empty()) throw InputError("EmptyFamily", "the tuple family is empty");
  if (s_max <= 0) s_max = flag_at(model, p).Q;
  auto boxes = nested_samples(N, p, sample_count, seed);
  return search_orders(boxes, [&](const RationalPoint& q) {
    std::optional<Order> best;
    for (const auto& d : F.dets) {
      Order o = nonholonomic_order(model, d.poly, q, s_max);
      if (!best || less_order(o, *best)) best = o;
      if (best->value == 0) break;
    }
    return *best;
  });
}

OrderSearch e_min(const StructureModel& model, const TupleFamily& F, const RationalPoint& p, const SubmanifoldChart& N,
                  int sample_count, std::uint64_t seed) {
  (void)model;
  if (F.dets.empty()) throw InputError("EmptyFamily", "the tuple family is empty");
  auto boxes = nested_samples(N, p, sample_count, seed);
  return search_orders(boxes, [&](const RationalPoint& q) {
    int best = std::numeric_limits<int>::max();
    for (const auto& d : F.dets) best = std::min(best, ord_diff(d.poly, q));
    return Order{best, false};
  });
}

Homogeneity homogeneity_check(const StructureModel& model, const TupleFamily& F, const RationalPoint& p,
                              const SubmanifoldChart& N) {
  Homogeneity h;
  std::optional<Chart> chart;
  try {
    chart = Chart::identity(model, p, &N);
  } catch (const PrivilegedCertificationFailed&) {
    h.note = "input coordinates are not privileged at " + point_to_string(p);
    return h;
  } catch (const UnsupportedStratumShape&) {
    h.note = N.label + " is not a coordinate subspace";
    return h;
  }
  Polynomial nu2 = nu_squared(F).shift(p);
  const auto& w = chart->weights();
  std::optional<int> degree;
  for (const auto& [e, c] : nu2.terms()) {
    int d = 0;
    for (auto j : chart->transverse_coords()) d += w[j] * e[j];
    if (degree && *degree != d) {
      h.note = "transverse degrees " + std::to_string(*degree) + " and " + std::to_string(d) + " both occur";
      return h;
    }
    degree = d;
  }
  if (!degree || *degree % 2 != 0) {
    h.note = "odd transverse degree";
    return h;
  }
  h.homogeneous = true;
  h.rho = *degree / 2;
  return h;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 8; ++i) g.push_back(std::ldexp(1.0, -i));
  return g;
}

RhoMaxEstimate rho_max_estimate(const StructureModel& model, const TupleFamily& F, const Chart& chart,
                                const std::vector<double>& lambda_grid, const RaySpec& spec, std::uint64_t seed) {
  (void)model;
  if (lambda_grid.size() < 6) throw InputError("InvalidArgument", "the lambda grid needs at least 6 points");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] < lambda_grid[i - 1]) || lambda_grid[i] <= 0)
      throw InputError("InvalidArgument", "the lambda grid must be positive and strictly decreasing");
  const auto& tan = chart.tangent_coords();
  const auto& tr = chart.transverse_coords();
  if (tr.empty()) throw InputError("InvalidArgument", "no transverse directions");
  const auto& w = chart.weights();

  std::vector<std::pair<std::vector<double>, std::vector<double>>> rays;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> z(tr.size(), 0.0);
      z[i] = s;
      rays.emplace_back(std::vector<double>(tan.size(), 0.0), z);
    }
  }
  Rng rng(mix_seed(seed, 11));
  for (int r = 0; r < spec.random_rays; ++r) {
    std::vector<double> y(tan.size(), 0.0), z(tr.size());
    if (r % 2 == 1)
      for (auto& v : y) v = rng.uniform(-spec.y_radius, spec.y_radius);
    for (auto& v : z) v = rng.uniform(-1, 1);
    z[rng.index(z.size())] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    rays.emplace_back(std::move(y), std::move(z));
  }

  RhoMaxEstimate out;
  bool any = false;
  for (auto& [y, z] : rays) {
    RayFit fit;
    fit.y = y;
    fit.z = z;
    std::vector<double> lx, ly;
    for (double lambda : lambda_grid) {
      std::vector<double> zl(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) zl[i] = std::pow(lambda, w[tr[i]]) * z[i];
      double v = nu(F, chart.map(chart.assemble(y, zl)));
      if (!(v > 0) || !std::isfinite(v)) {
        fit.degenerate = true;
        break;
      }
      lx.push_back(std::log(lambda));
      ly.push_back(std::log(v));
    }
    if (fit.degenerate) {
      ++out.excluded;
      out.rays.push_back(std::move(fit));
      continue;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
      syy += (ly[i] - my) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    double ssr = std::max(0.0, syy - fit.slope * sxy);
    fit.r2 = syy > 1e-300 ? 1 - ssr / syy : 1.0;
    fit.sigma = fit_sigma(ssr, lx.size(), sxx);
    out.min_r2 = std::min(out.min_r2, fit.r2);
    if (fit.r2 < 0.9) ++out.low_r2;
    if (!any || fit.slope > out.value) {
      out.value = fit.slope;
      out.sigma = fit.sigma;
    }
    any = true;
    out.rays.push_back(std::move(fit));
  }
  if (!any) throw DegenerateFit("nu vanishes along every sampled ray");
  return out;
}

RhoReport rho_report(const StructureModel& model, const TupleFamily& F, const RationalPoint& p,
                     const SubmanifoldChart& N, int Q_N, const RhoOptions& options) {
  RhoReport r;
  r.stratum = N.label;
  r.p = p;
  r.n = static_cast<int>(model.n);
  r.k = N.k;
  r.Q_R = F.Q_R;
  r.Q_N = Q_N;
  r.Q_p = flag_at(model, p).Q;
  r.rho_min = rho_min(model, F, p, N, options.sample_count, options.seed);
  r.e_min = e_min(model, F, p, N, options.sample_count, options.seed);
  r.homogeneity = homogeneity_check(model, F, p, N);
  Chart chart = Chart::make(model, p, &N);
  r.rho_max = rho_max_estimate(model, F, chart, options.lambda_grid, options.rays, options.seed);
  if (r.homogeneity.homogeneous) r.rho_max_exact = r.homogeneity.rho;
  return r;
}

}  // namespace srvol

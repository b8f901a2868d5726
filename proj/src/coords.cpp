#include "srvol/coords.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "srvol/errors.hpp"
#include "srvol/flags.hpp"
#include "srvol/orders.hpp"
#include "srvol/strata.hpp"

namespace srvol {

namespace {

std::vector<double> to_double(std::span<const Rational> p) {
  std::vector<double> v;
  v.reserve(p.size());
  for (const auto& x : p) v.push_back(x.get_d());
  return v;
}

// Is X tangent to N along N? Exact for coordinate-aligned strata, sampled otherwise.
bool tangent_along(const VectorField& X, const SubmanifoldChart& N) {
  if (auto aligned = N.aligned_coordinates()) {
    std::vector<bool> along(N.ambient_dim(), false);
    for (auto c : *aligned) along[c] = true;
    for (std::size_t j = 0; j < X.dim(); ++j)
      if (!along[j] && !X[j].compose(N.map).is_zero()) return false;
    return true;
  }
  std::uint64_t state = 0x5eed;
  for (int s = 0; s < 8; ++s) {
    RationalPoint u = N.domain_center();
    if (s > 0) {
      RationalPoint unit = random_rational_point(RationalPoint(u.size(), 0), 1, state);
      for (std::size_t l = 0; l < u.size(); ++l) {
        const auto& [lo, hi] = N.domain[l];
        u[l] = (lo + hi) / 2 + unit[l] * (hi - lo) / 2;
      }
    }
    Echelon T(N.ambient_dim());
    for (auto& c : N.tangent_vectors(u)) T.add(c);
    if (!T.in_span(X.eval(N.point(u)))) return false;
  }
  return true;
}

struct Candidate {
  VectorField field;
  int length;
  std::string label;
};

}  // namespace

AdaptedBasis adapted_basis(const StructureModel& model, const RationalPoint& p, const SubmanifoldChart* N) {
  FlagReport flag = flag_at(model, p);
  const auto& table = model.brackets();
  std::vector<Candidate> brackets;
  for (int len = 1; len <= flag.r; ++len)
    for (const auto& I : table.nonzero_of_length(len)) brackets.push_back({table.bracket_of(I), len, to_string(I)});

  std::vector<Candidate> tangent;
  if (N) {
    auto u = N->parameter_of(p);
    if (!u) throw InputError("PointNotOnStratum", point_to_string(p) + " does not lie on stratum " + N->label);
    std::vector<int> restricted = restricted_flag_at(model, *N, *u);
    std::vector<Candidate> offered;
    for (std::size_t t = 0; t < N->tangent_fields.size(); ++t) {
      const auto& Z = N->tangent_fields[t];
      if (!tangent_along(Z, *N))
        throw CannotRealizeRestrictedFlag("tangent field T" + std::to_string(t + 1) + " is not tangent to " + N->label);
      offered.push_back({Z, N->tangent_lengths[t], "T" + std::to_string(t + 1)});
    }
    for (const auto& c : brackets)
      if (tangent_along(c.field, *N)) offered.push_back(c);
    std::stable_sort(offered.begin(), offered.end(), [](const auto& a, const auto& b) { return a.length < b.length; });
    Echelon span(model.n);
    std::size_t next = 0;
    for (int len = 1; len <= flag.r; ++len) {
      for (; next < offered.size() && offered[next].length <= len; ++next)
        if (span.add(offered[next].field.eval(p))) tangent.push_back(offered[next]);
      if (static_cast<int>(span.rank()) != restricted[static_cast<std::size_t>(len - 1)])
        throw CannotRealizeRestrictedFlag("no tangent combination realizes the restricted flag of " + N->label +
                                          " at length " + std::to_string(len) + "; supply tangent_fields");
    }
  }

  AdaptedBasis basis;
  basis.base = p;
  Echelon span(model.n);
  std::vector<Candidate> transverse;
  std::size_t next_t = 0;
  for (int len = 1; len <= flag.r; ++len) {
    for (; next_t < tangent.size() && tangent[next_t].length <= len; ++next_t) span.add(tangent[next_t].field.eval(p));
    for (const auto& c : brackets)
      if (c.length == len && span.add(c.field.eval(p))) transverse.push_back(c);
  }
  for (const auto* group : {&tangent, &transverse})
    for (const auto& c : *group) {
      basis.fields.push_back(c.field);
      basis.lengths.push_back(c.length);
      basis.labels.push_back(c.label);
    }
  basis.tangent_count = static_cast<int>(tangent.size());
  int sum = 0;
  for (int l : basis.lengths) sum += l;
  if (span.rank() != model.n || sum != flag.Q)
    throw CertificationError("AdaptedBasisFailed", "adapted basis lengths sum to " + std::to_string(sum) +
                                                       " instead of Q = " + std::to_string(flag.Q));
  return basis;
}

std::vector<double> dilate(const Dilation& d, double lambda, std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::pow(lambda, d.weights[i]);
  return out;
}

RationalPoint dilate(const Dilation& d, const Rational& lambda, std::span<const Rational> x) {
  RationalPoint out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int k = 0; k < d.weights[i]; ++k) out[i] *= lambda;
  return out;
}

double pseudo_norm(const Dilation& d, std::span<const double> x) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::pow(std::abs(x[i]), 1.0 / d.weights[i]));
  return m;
}

std::vector<int> coordinate_orders(const StructureModel& model, const RationalPoint& p) {
  FlagReport flag = flag_at(model, p);
  std::vector<int> orders;
  for (std::size_t j = 0; j < model.n; ++j) {
    Polynomial h = Polynomial::variable(model.n, j) - Polynomial::constant(model.n, p[j]);
    orders.push_back(nonholonomic_order(model, h, p, flag.r + 1).value);
  }
  return orders;
}

Chart Chart::identity(const StructureModel& model, const RationalPoint& p, const SubmanifoldChart* N) {
  Chart c;
  c.kind_ = Kind::Identity;
  c.base_ = p;
  c.base_d_ = to_double(p);
  FlagReport flag = flag_at(model, p);
  c.weights_ = coordinate_orders(model, p);
  auto sorted = c.weights_;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != flag.weights)
    throw PrivilegedCertificationFailed("input coordinates are not privileged at " + point_to_string(p));
  if (N) {
    auto aligned = N->aligned_coordinates();
    if (!aligned) throw UnsupportedStratumShape("stratum " + N->label + " is not a coordinate subspace");
    if (!N->parameter_of(p)) throw InputError("PointNotOnStratum", point_to_string(p) + " is not on " + N->label);
    c.tangent_ = *aligned;
  }
  for (std::size_t j = 0; j < model.n; ++j)
    if (std::find(c.tangent_.begin(), c.tangent_.end(), j) == c.tangent_.end()) c.transverse_.push_back(j);
  c.lin_inverse_.assign(model.n * model.n, 0.0);
  for (std::size_t j = 0; j < model.n; ++j) c.lin_inverse_[j * model.n + j] = 1.0;
  return c;
}

Chart Chart::exponential(const StructureModel& model, AdaptedBasis basis, IntegratorSettings settings) {
  Chart c;
  c.kind_ = Kind::Exponential;
  c.base_ = basis.base;
  c.base_d_ = to_double(basis.base);
  c.weights_ = basis.lengths;
  c.settings_ = settings;
  for (int j = 0; j < basis.tangent_count; ++j) c.tangent_.push_back(static_cast<std::size_t>(j));
  for (std::size_t j = static_cast<std::size_t>(basis.tangent_count); j < model.n; ++j) c.transverse_.push_back(j);
  for (const auto& Z : basis.fields) c.flows_.emplace_back(Z);
  c.basis_ = std::move(basis);
  auto inv = srvol::inverse(c.jacobian_at_origin());
  if (!inv) throw CertificationError("AdaptedBasisFailed", "basis is singular at the base point");
  for (const auto& row : *inv)
    for (const auto& x : row) c.lin_inverse_.push_back(x.get_d());
  return c;
}

Chart Chart::make(const StructureModel& model, const RationalPoint& p, const SubmanifoldChart* N,
                  IntegratorSettings settings) {
  try {
    Chart c = identity(model, p, N);
    c.settings_ = settings;
    return c;
  } catch (const PrivilegedCertificationFailed&) {
  } catch (const UnsupportedStratumShape&) {
  }
  return exponential(model, adapted_basis(model, p, N), settings);
}

std::vector<double> Chart::assemble(std::span<const double> y, std::span<const double> z) const {
  if (y.size() != tangent_.size() || z.size() != transverse_.size())
    throw DimensionMismatch("chart assemble: expected " + std::to_string(tangent_.size()) + " + " +
                            std::to_string(transverse_.size()) + " coordinates");
  std::vector<double> x(dim(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) x[tangent_[i]] = y[i];
  for (std::size_t i = 0; i < z.size(); ++i) x[transverse_[i]] = z[i];
  return x;
}

RationalMatrix Chart::jacobian_at_origin() const {
  const std::size_t n = dim();
  RationalMatrix a(n, RationalPoint(n, 0));
  if (kind_ == Kind::Identity) {
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
    return a;
  }
  for (std::size_t j = 0; j < n; ++j) {
    auto v = basis_->fields[j].eval(base_);
    for (std::size_t l = 0; l < n; ++l) a[l][j] = v[l];
  }
  return a;
}

std::vector<double> Chart::map(std::span<const double> x) const {
  const std::size_t n = dim();
  if (x.size() != n) throw DimensionMismatch("chart point arity");
  std::vector<double> q = base_d_;
  if (kind_ == Kind::Identity) {
    for (std::size_t i = 0; i < n; ++i) q[i] += x[i];
    return q;
  }
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double h0 = settings_.radius / settings_.steps_per_radius;
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j] == 0.0) continue;
    int steps = std::max(1, static_cast<int>(std::ceil(std::abs(x[j]) / h0)));
    double h = x[j] / steps;
    const FloatField& Z = flows_[j];
    for (int s = 0; s < steps; ++s) {
      Z.eval(q, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = q[i] + 0.5 * h * k1[i];
      Z.eval(tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = q[i] + 0.5 * h * k2[i];
      Z.eval(tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = q[i] + h * k3[i];
      Z.eval(tmp, k4);
      for (std::size_t i = 0; i < n; ++i) q[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
  }
  return q;
}

namespace {
// Solves a x = b in place (a row-major n x n); false when singular.
bool solve_dense(const std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(a.data(), N, N);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) return false;
  Eigen::VectorXd x = lu.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), N));
  for (std::size_t i = 0; i < n; ++i) b[i] = x(static_cast<Eigen::Index>(i));
  return true;
}

double max_abs(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

std::vector<double> Chart::inverse(std::span<const double> q) const {
  const std::size_t n = dim();
  if (q.size() != n) throw DimensionMismatch("chart inverse point arity");
  std::vector<double> x(n, 0.0);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j) x[l] += lin_inverse_[l * n + j] * (q[j] - base_d_[j]);
  if (kind_ == Kind::Identity) return x;

  auto residual = [&](const std::vector<double>& y) {
    auto r = map(y);
    for (std::size_t i = 0; i < n; ++i) r[i] -= q[i];
    return r;
  };
  const double scale = std::max(1.0, max_abs(q));
  std::vector<double> r = residual(x);
  double rn = max_abs(r);
  std::vector<double> jac(n * n);
  for (int it = 0; it < 60 && rn > 1e-14 * scale; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      auto fp = map(xp), fm = map(xm);
      for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (fp[i] - fm[i]) / (2 * h);
    }
    std::vector<double> step = r;
    if (!solve_dense(jac, step, n)) throw ChartInversionFailed("singular chart differential");
    double t = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half, t *= 0.5) {
      std::vector<double> trial = x;
      for (std::size_t i = 0; i < n; ++i) trial[i] -= t * step[i];
      auto rt = residual(trial);
      double rtn = max_abs(rt);
      if (rtn < rn) {
        x = std::move(trial);
        r = std::move(rt);
        rn = rtn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(rn <= 1e-10 * scale)) throw ChartInversionFailed("Newton stalled with residual " + std::to_string(rn));
  return x;
}

std::vector<double> chart_map(const Chart& chart, std::span<const double> x) { return chart.map(x); }
std::vector<double> chart_inverse(const Chart& chart, std::span<const double> q) { return chart.inverse(q); }

Polynomial truncate_weighted(const Polynomial& f, std::span<const int> weights, int max_degree) {
  Polynomial out(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += weights[i] * e[i];
    if (d <= max_degree) out.add_term(e, c);
  }
  return out;
}

namespace {

// sum over k with sum_j k_j w_j <= D of x^k / k! (Z_1^k1 ... Z_n^kn g)(p)
class LieSeries {
 public:
  LieSeries(const std::vector<VectorField>& Z, std::vector<int> w, RationalPoint p)
      : Z_(Z), w_(std::move(w)), p_(std::move(p)) {}

  Polynomial jet(const Polynomial& g, int D) const {
    Polynomial out(Z_.size());
    Exponent k(Z_.size(), 0);
    recurse(static_cast<int>(Z_.size()) - 1, g, k, D, Rational(1), out);
    return out;
  }

 private:
  void recurse(int j, const Polynomial& h, Exponent& k, int budget, const Rational& coef, Polynomial& out) const {
    if (h.is_zero()) return;
    if (j < 0) {
      Rational v = h.eval(p_);
      if (v != 0) out.add_term(k, coef * v);
      return;
    }
    const auto J = static_cast<std::size_t>(j);
    Polynomial cur = h;
    Rational c = coef;
    for (int kj = 0;; ++kj) {
      k[J] = static_cast<std::uint16_t>(kj);
      recurse(j - 1, cur, k, budget - kj * w_[J], c, out);
      if ((kj + 1) * w_[J] > budget) break;
      cur = Z_[J].apply(cur);
      if (cur.is_zero()) break;
      c /= (kj + 1);
    }
    k[J] = 0;
  }

  const std::vector<VectorField>& Z_;
  std::vector<int> w_;
  RationalPoint p_;
};

PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b, std::span<const int> w, int D) {
  const std::size_t n = a.size();
  const std::size_t nv = a[0][0].nvars();
  PolyMatrix c(n, std::vector<Polynomial>(n, Polynomial(nv)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!b[k][j].is_zero()) c[i][j] += truncate_weighted(a[i][k] * b[k][j], w, D);
    }
  return c;
}

}  // namespace

std::vector<VectorField> pushforward_jets(const StructureModel& model, const Chart& chart, int D) {
  const std::size_t n = model.n;
  const auto& w = chart.weights();
  std::vector<VectorField> out;
  if (chart.kind() == Chart::Kind::Identity) {
    for (const auto& X : model.family) {
      std::vector<Polynomial> c;
      for (std::size_t l = 0; l < n; ++l) c.push_back(truncate_weighted(X[l].shift(chart.base()), w, D));
      out.emplace_back(std::move(c));
    }
    return out;
  }
  const auto& basis = *chart.basis();
  LieSeries series(basis.fields, w, chart.base());
  const int wmax = *std::max_element(w.begin(), w.end());
  std::vector<Polynomial> phi;
  for (std::size_t l = 0; l < n; ++l) phi.push_back(series.jet(Polynomial::variable(n, l), D + wmax));
  // D Phi = A0 + E with E of positive weighted order
  RationalMatrix A0 = chart.jacobian_at_origin();
  auto A0inv = inverse(A0);
  if (!A0inv) throw CertificationError("AdaptedBasisFailed", "basis is singular at the base point");
  PolyMatrix M(n, std::vector<Polynomial>(n, Polynomial(n)));
  PolyMatrix term(n, std::vector<Polynomial>(n, Polynomial(n)));
  {
    PolyMatrix E(n, std::vector<Polynomial>(n, Polynomial(n)));
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j)
        E[l][j] = truncate_weighted(phi[l].partial(j), w, D) - Polynomial::constant(n, A0[l][j]);
    PolyMatrix Ainv(n, std::vector<Polynomial>(n, Polynomial(n)));
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) Ainv[l][j] = Polynomial::constant(n, (*A0inv)[l][j]);
    M = multiply(Ainv, E, w, D);
    for (auto& row : M)
      for (auto& x : row) x = -x;
    term = Ainv;
  }
  PolyMatrix S = term;
  for (int t = 1; t <= D; ++t) {
    term = multiply(M, term, w, D);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) S[l][j] += term[l][j];
  }
  for (const auto& X : model.family) {
    std::vector<Polynomial> xphi;
    for (std::size_t j = 0; j < n; ++j) xphi.push_back(series.jet(X[j], D));
    std::vector<Polynomial> c(n, Polynomial(n));
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j)
        if (!S[l][j].is_zero() && !xphi[j].is_zero()) c[l] += truncate_weighted(S[l][j] * xphi[j], w, D);
    out.emplace_back(std::move(c));
  }
  return out;
}

bool has_weighted_order_at_least_minus_one(const std::vector<VectorField>& fields, std::span<const int> weights) {
  for (const auto& X : fields)
    for (std::size_t j = 0; j < X.dim(); ++j)
      if (!X[j].is_zero() && X[j].min_weighted_degree(weights) < weights[j] - 1) return false;
  return true;
}

bool is_homogeneous_minus_one(const std::vector<VectorField>& fields, std::span<const int> weights) {
  for (const auto& X : fields)
    for (std::size_t j = 0; j < X.dim(); ++j)
      if (!X[j].is_zero() && (X[j].min_weighted_degree(weights) != weights[j] - 1 ||
                              X[j].max_weighted_degree(weights) != weights[j] - 1))
        return false;
  return true;
}

std::vector<VectorField> nilpotent_approx(const StructureModel& model, const Chart& chart) {
  const auto& w = chart.weights();
  const int wmax = *std::max_element(w.begin(), w.end());
  auto jets = pushforward_jets(model, chart, wmax - 1);
  if (!has_weighted_order_at_least_minus_one(jets, w))
    throw PrivilegedCertificationFailed("a pushed-forward field has weighted order below -1");
  std::vector<VectorField> out;
  for (const auto& X : jets) {
    std::vector<Polynomial> c;
    for (std::size_t j = 0; j < model.n; ++j) c.push_back(X[j].weighted_part(w, w[j] - 1));
    out.emplace_back(std::move(c));
  }
  StructureModel nil("nilpotent", out, Polynomial::constant(model.n, 1));
  nil.bracket_depth_cap = model.depth_cap();
  auto g0 = flag_at(nil, RationalPoint(model.n, 0)).growth;
  if (g0 != flag_at(model, chart.base()).growth)
    throw PrivilegedCertificationFailed("nilpotent approximation does not reproduce the growth vector at " +
                                        point_to_string(chart.base()));
  return out;
}

}  // namespace srvol

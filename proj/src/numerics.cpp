#include "srvol/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "srvol/errors.hpp"
#include "srvol/flags.hpp"
#include "srvol/random.hpp"
#include "srvol/strata.hpp"

namespace srvol {

namespace {

std::vector<double> to_double(std::span<const Rational> p) {
  std::vector<double> v;
  for (const auto& x : p) v.push_back(x.get_d());
  return v;
}

std::vector<FloatField> compile(const std::vector<VectorField>& family) {
  std::vector<FloatField> out;
  for (const auto& X : family) out.emplace_back(X);
  return out;
}

double gaussian(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0) u1 = rng.uniform();
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * rng.uniform());
}

std::vector<double> unit_vector(std::size_t m, Rng& rng) {
  std::vector<double> v(m);
  double s = 0;
  do {
    s = 0;
    for (auto& x : v) {
      x = gaussian(rng);
      s += x * x;
    }
  } while (s < 1e-12);
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

Control random_control(std::size_t m, int seg, bool rotating, Rng& rng) {
  Control c;
  if (!rotating || m < 2) {
    for (int s = 0; s < seg; ++s) c.u.push_back(unit_vector(m, rng));
    return c;
  }
  auto a = unit_vector(m, rng);
  auto b = unit_vector(m, rng);
  double dot = 0;
  for (std::size_t i = 0; i < m; ++i) dot += a[i] * b[i];
  double nb = 0;
  for (std::size_t i = 0; i < m; ++i) {
    b[i] -= dot * a[i];
    nb += b[i] * b[i];
  }
  if (nb < 1e-12) {
    b.assign(m, 0.0);
    b[a[0] > 0.5 ? 1 : 0] = 1;
    nb = 1;
  }
  for (auto& x : b) x /= std::sqrt(nb);
  double omega = rng.uniform(-4 * std::numbers::pi, 4 * std::numbers::pi);
  double phase = rng.uniform(0, 2 * std::numbers::pi);
  for (int s = 0; s < seg; ++s) {
    double t = (s + 0.5) / seg;
    std::vector<double> u(m);
    for (std::size_t i = 0; i < m; ++i) u[i] = std::cos(omega * t + phase) * a[i] + std::sin(omega * t + phase) * b[i];
    c.u.push_back(std::move(u));
  }
  return c;
}

double norm_inf(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Shooter {
  const std::vector<FloatField>& fields;
  std::vector<double> p;
  int seg;
  std::size_t m;

  Control control(const Eigen::VectorXd& U) const {
    Control c;
    for (int s = 0; s < seg; ++s) {
      std::vector<double> u(m);
      for (std::size_t i = 0; i < m; ++i) u[i] = U(static_cast<Eigen::Index>(static_cast<std::size_t>(s) * m + i));
      c.u.push_back(std::move(u));
    }
    return c;
  }
  Eigen::VectorXd endpoint(const Eigen::VectorXd& U) const {
    auto q = integrate_control(fields, p, control(U), 1.0);
    return Eigen::Map<Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
  }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& U) const {
    Eigen::MatrixXd J(static_cast<Eigen::Index>(p.size()), U.size());
    for (Eigen::Index j = 0; j < U.size(); ++j) {
      double h = 1e-7 * std::max(1e-2, std::abs(U(j)));
      Eigen::VectorXd a = U, b = U;
      a(j) += h;
      b(j) -= h;
      J.col(j) = (endpoint(a) - endpoint(b)) / (2 * h);
    }
    return J;
  }
  double length(const Eigen::VectorXd& U) const {
    double L = 0;
    for (int s = 0; s < seg; ++s) L += U.segment(static_cast<Eigen::Index>(static_cast<std::size_t>(s) * m), static_cast<Eigen::Index>(m)).norm();
    return L / seg;
  }

  // Gauss-Newton with minimum-norm steps; true once the endpoint is within tol of the target.
  bool project(Eigen::VectorXd& U, const Eigen::VectorXd& target, double tol, int iterations) const {
    Eigen::VectorXd r = target - endpoint(U);
    for (int it = 0; it < iterations; ++it) {
      if (r.lpNorm<Eigen::Infinity>() < tol) return true;
      Eigen::VectorXd step = jacobian(U).completeOrthogonalDecomposition().solve(r);
      double t = 1;
      bool moved = false;
      for (int half = 0; half < 20; ++half, t *= 0.5) {
        Eigen::VectorXd Ut = U + t * step;
        Eigen::VectorXd rt = target - endpoint(Ut);
        if (rt.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>()) {
          U = std::move(Ut);
          r = std::move(rt);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    return r.lpNorm<Eigen::Infinity>() < tol;
  }

  // Shortest control found from the start U0, or nullopt when the target was not hit.
  std::optional<double> shoot(Eigen::VectorXd U, const Eigen::VectorXd& target, double tol) const {
    if (!project(U, target, tol, 80)) return std::nullopt;
    for (int it = 0; it < 25; ++it) {
      Eigen::MatrixXd J = jacobian(U);
      auto cod = J.completeOrthogonalDecomposition();
      // energy gradient projected on the tangent space of the constraint set
      Eigen::VectorXd g = U - cod.solve(J * U);
      if (g.norm() < 1e-9 * std::max(1e-12, U.norm())) break;
      bool better = false;
      for (double a : {0.5, 0.25, 0.1}) {
        Eigen::VectorXd Ut = U - a * g;
        if (!project(Ut, target, tol, 20)) continue;
        if (Ut.squaredNorm() < U.squaredNorm() * (1 - 1e-6)) {
          U = std::move(Ut);
          better = true;
          break;
        }
      }
      if (!better) break;
    }
    return length(U);
  }
};

bool stable(const std::vector<double>& v, double band) {
  if (v.empty()) return false;
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (!(mean > 0) || !std::isfinite(mean)) return false;
  return std::all_of(v.begin(), v.end(), [&](double x) { return std::abs(x - mean) <= band * mean; });
}

struct LineFit {
  double slope = 0, sigma = 0, r2 = 1;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double k = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  double ssr = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 1e-300 ? 1 - ssr / syy : 1.0;
  f.sigma = x.size() > 2 ? std::sqrt(ssr / (k - 2) / sxx) : 0.0;
  return f;
}

const int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

std::vector<double> integrate_control(const std::vector<FloatField>& fields, std::span<const double> x0,
                                      const Control& c, double duration, int substeps) {
  const std::size_t n = x0.size();
  std::vector<double> x(x0.begin(), x0.end());
  if (c.u.empty() || duration == 0) return x;
  const double h = duration / static_cast<double>(c.u.size()) / substeps;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), f(n);
  for (const auto& u : c.u) {
    auto rhs = [&](std::span<const double> y, std::vector<double>& out) {
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (u[i] == 0.0) continue;
        fields[i].eval(y, f);
        for (std::size_t l = 0; l < n; ++l) out[l] += u[i] * f[l];
      }
    };
    for (int s = 0; s < substeps; ++s) {
      rhs(x, k1);
      for (std::size_t l = 0; l < n; ++l) tmp[l] = x[l] + 0.5 * h * k1[l];
      rhs(tmp, k2);
      for (std::size_t l = 0; l < n; ++l) tmp[l] = x[l] + 0.5 * h * k2[l];
      rhs(tmp, k3);
      for (std::size_t l = 0; l < n; ++l) tmp[l] = x[l] + h * k3[l];
      rhs(tmp, k4);
      for (std::size_t l = 0; l < n; ++l) x[l] += h / 6.0 * (k1[l] + 2 * k2[l] + 2 * k3[l] + k4[l]);
    }
  }
  return x;
}

ReachSample reach_ball(const StructureModel& model, const RationalPoint& p, double eps, int count, int seg,
                       std::uint64_t seed) {
  if (!(eps >= 0)) throw InputError("InvalidArgument", "eps must be non-negative");
  if (count < 1 || seg < 1) throw InputError("InvalidArgument", "count and seg must be positive");
  ReachSample r;
  r.p = p;
  r.eps = eps;
  r.seed = seed;
  auto x0 = to_double(p);
  if (eps == 0) {
    r.cloud.push_back(x0);
    return r;
  }
  auto fields = compile(model.family);
  Rng rng(mix_seed(seed, 21));
  for (int i = 0; i < count; ++i) {
    Control c = random_control(model.m(), seg, i % 2 == 1, rng);
    r.cloud.push_back(integrate_control(fields, x0, c, eps));
    r.controls.push_back(std::move(c));
  }
  return r;
}

BallBoxResult ballbox_check(const StructureModel& model, const Chart& chart, const std::vector<double>& eps_list,
                            int count, std::uint64_t seed) {
  if (eps_list.size() < 2) throw InputError("InvalidArgument", "ballbox_check needs at least two radii");
  const std::size_t n = chart.dim();
  const auto d = chart.dilation();
  auto fields = compile(model.family);
  Shooter shooter{fields, to_double(chart.base()), 8, model.m()};

  // box targets in chart coordinates at unit scale: corners and axis points
  std::vector<std::vector<double>> targets;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    targets.push_back(x);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (double s : {1.0, -1.0}) {
      std::vector<double> x(n, 0.0);
      x[i] = s;
      targets.push_back(x);
    }
  Rng rng(mix_seed(seed, 31));
  const int starts = 3;
  std::vector<Eigen::VectorXd> unit_starts;
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd U(shooter.seg * static_cast<int>(shooter.m));
    for (Eigen::Index j = 0; j < U.size(); ++j) U(j) = rng.uniform(-1, 1);
    unit_starts.push_back(U);
  }

  BallBoxResult out;
  out.eps = eps_list;
  for (double eps : eps_list) {
    auto cloud = reach_ball(model, chart.base(), eps, count, 8, seed);
    double cu = 0;
    for (const auto& q : cloud.cloud) cu = std::max(cu, pseudo_norm(d, chart.inverse(q)) / eps);
    out.C_upper.push_back(cu);

    double cl = 0;
    for (const auto& t : targets) {
      auto q = chart.map(dilate(d, eps, t));
      Eigen::VectorXd target = Eigen::Map<Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(n));
      double scale = norm_inf(dilate(d, eps, t));
      double tol = 1e-9 * scale + 1e-14;
      std::optional<double> best;
      for (const auto& U0 : unit_starts) {
        auto L = shooter.shoot(eps * U0, target, tol);
        if (L && (!best || *L < *best)) best = L;
      }
      if (!best) {
        ++out.unreached;
        continue;
      }
      cl = std::max(cl, *best / eps);
    }
    out.C_lower.push_back(cl);
  }
  out.C_upper_max = *std::max_element(out.C_upper.begin(), out.C_upper.end());
  out.C_lower_max = *std::max_element(out.C_lower.begin(), out.C_lower.end());
  out.pass = out.unreached == 0 && stable(out.C_upper, 0.2) && stable(out.C_lower, 0.2);
  return out;
}

std::string to_string(QuadVerdict v) {
  switch (v) {
    case QuadVerdict::Converges: return "Converges";
    case QuadVerdict::Diverges: return "Diverges";
    case QuadVerdict::Unclear: return "Unclear";
  }
  return "Unclear";
}

QuadDiagnosis quad_diagnose(const StructureModel& model, const TupleFamily& F, const Chart& chart,
                            const SubmanifoldChart& N, const QuadOptions& options, const RhoReport* rho) {
  if (options.shells < 5) throw InputError("InvalidArgument", "quad_diagnose needs at least 5 shells");
  if (options.samples < 1) throw InputError("InvalidArgument", "samples per shell must be positive");
  const auto& tan = chart.tangent_coords();
  const auto& tr = chart.transverse_coords();
  if (tr.empty()) throw InputError("InvalidArgument", "no transverse directions");
  const auto& w = chart.weights();
  const RationalPoint& p = chart.base();
  const std::size_t n = chart.dim();
  if (n > std::size(kPrimes)) throw InputError("InvalidArgument", "dimension too large for the sampler");

  QuadDiagnosis q;
  q.Q_p = flag_at(model, p).Q;
  auto u = N.parameter_of(p);
  if (!u) throw InputError("PointNotOnStratum", point_to_string(p) + " is not on " + N.label);
  q.Q_N = homogeneous_dimension(restricted_flag_at(model, N, *u));
  const int power = q.Q_p - q.Q_N - 1;

  // Kronecker sequence with a seeded shift; the same points serve every shell
  Rng rng(mix_seed(options.seed, 41));
  std::vector<double> alpha(n), shift(n);
  for (std::size_t d = 0; d < n; ++d) {
    double s = std::sqrt(static_cast<double>(kPrimes[d]));
    alpha[d] = s - std::floor(s);
    shift[d] = rng.uniform();
  }
  const std::size_t faces = 2 * tr.size();
  std::vector<std::vector<double>> ys, zs;
  for (int i = 1; i <= options.samples; ++i) {
    std::vector<double> v(n);
    for (std::size_t d = 0; d < n; ++d) {
      double x = shift[d] + i * alpha[d];
      v[d] = x - std::floor(x);
    }
    std::vector<double> y(tan.size()), z(tr.size());
    for (std::size_t a = 0; a < tan.size(); ++a)
      y[a] = (2 * v[a] - 1) * std::pow(options.y_radius, w[tan[a]]);
    std::size_t face = std::min(faces - 1, static_cast<std::size_t>(v[tan.size()] * static_cast<double>(faces)));
    std::size_t next = tan.size() + 1;
    for (std::size_t b = 0; b < tr.size(); ++b) {
      if (b == face / 2) {
        z[b] = face % 2 == 0 ? 1.0 : -1.0;
      } else {
        z[b] = 2 * v[next++] - 1;
      }
    }
    ys.push_back(std::move(y));
    zs.push_back(std::move(z));
  }

  std::vector<double> lx, ly;
  for (int j = 0; j < options.shells; ++j) {
    double lambda = std::exp2(-1.0 - 0.5 * j);
    double sum = 0;
    int used = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      std::vector<double> zl(tr.size());
      for (std::size_t b = 0; b < tr.size(); ++b) zl[b] = std::pow(lambda, w[tr[b]]) * zs[i][b];
      double v = nu(F, chart.map(chart.assemble(ys[i], zl)));
      if (!(v > 0) || !std::isfinite(v)) continue;
      sum += 1 / v;
      ++used;
    }
    if (used == 0) throw DegenerateFit("nu vanishes on every sample of the shell at lambda = " + std::to_string(lambda));
    double I = std::pow(lambda, power) * sum / used;
    q.lambda.push_back(lambda);
    q.shell.push_back(I);
    lx.push_back(std::log(lambda));
    ly.push_back(std::log(I));
  }
  auto f = fit_line(lx, ly);
  q.exponent = f.slope;
  q.exponent_sigma = f.sigma;
  q.r2 = f.r2;
  for (std::size_t j = 0; j + 1 < q.lambda.size(); ++j)
    q.shell_sum += (q.lambda[j] - q.lambda[j + 1]) * (q.shell[j] + q.shell[j + 1]) / 2;
  if (q.exponent <= -0.9) {
    q.verdict = QuadVerdict::Diverges;
  } else if (q.exponent >= -0.7) {
    q.verdict = QuadVerdict::Converges;
  } else {
    q.verdict = QuadVerdict::Unclear;
  }
  if (rho) {
    const int base = rho->threshold() - 1;
    if (rho->rho_max_exact) q.predicted = base - *rho->rho_max_exact;
    q.predicted_upper = base - rho->rho_min.value.value;
    q.predicted_lower = base - rho->rho_max.value;
  }
  return q;
}

double nilpotent_ball_volume(const StructureModel& model, const Chart& chart, double eps, int mc_count,
                             std::uint64_t seed, std::vector<char>* inside) {
  if (mc_count < 2) throw InputError("InvalidArgument", "mc_count must be at least 2");
  const std::size_t n = chart.dim();
  const auto d = chart.dilation();
  StructureModel nil("nilpotent", nilpotent_approx(model, chart), Polynomial::constant(n, 1));
  auto cloud = reach_ball(nil, RationalPoint(n, 0), eps, std::max(1, mc_count / 2), 16, seed);

  std::vector<double> radius, dirs;
  double rmax = 0;
  for (const auto& c : cloud.cloud) {
    double r = pseudo_norm(d, c);
    if (r <= 0) continue;
    auto dir = dilate(d, 1 / r, c);
    radius.push_back(r);
    dirs.insert(dirs.end(), dir.begin(), dir.end());
    rmax = std::max(rmax, r);
  }
  if (radius.empty()) throw DegenerateFit("the reach cloud collapsed to its base point");
  rmax *= 1.02;
  double box = 1;
  for (std::size_t i = 0; i < n; ++i) box *= 2 * std::pow(rmax, d.weights[i]);

  constexpr std::size_t K = 4;
  Rng rng(mix_seed(seed, 51));
  int hits = 0;
  if (inside) inside->clear();
  std::vector<double> x(n);
  for (int s = 0; s < mc_count; ++s) {
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(-1, 1) * std::pow(rmax, d.weights[i]);
    double r = pseudo_norm(d, x);
    bool in = false;
    if (r > 0) {
      auto dir = dilate(d, 1 / r, x);
      // K nearest cloud directions
      std::array<std::pair<double, double>, K> best;
      best.fill({std::numeric_limits<double>::infinity(), 0.0});
      for (std::size_t c = 0; c < radius.size(); ++c) {
        double dist = 0;
        for (std::size_t i = 0; i < n; ++i) {
          double t = dirs[c * n + i] - dir[i];
          dist += t * t;
        }
        if (dist < best[K - 1].first) {
          best[K - 1] = {dist, radius[c]};
          for (std::size_t k = K - 1; k > 0 && best[k].first < best[k - 1].first; --k) std::swap(best[k], best[k - 1]);
        }
      }
      for (const auto& b : best) in = in || b.second >= r;
    } else {
      in = true;
    }
    hits += in;
    if (inside) inside->push_back(in);
  }
  return box * hits / mc_count;
}

DensityEstimate density_estimate(const StructureModel& model, const Chart& chart, int mc_count, std::uint64_t seed) {
  DensityEstimate e;
  for (int w : chart.weights()) e.Q += w;
  std::vector<char> inside;
  e.ball_volume = nilpotent_ball_volume(model, chart, 1.0, mc_count, seed, &inside);
  double scale = std::abs(model.volume_density.eval(chart.base()).get_d() * determinant(chart.jacobian_at_origin()).get_d());
  if (!(scale > 0)) throw InputError("InvalidArgument", "the volume density vanishes at the base point");
  const double hits = static_cast<double>(std::count(inside.begin(), inside.end(), 1));
  if (hits == 0) throw DegenerateFit("no Monte Carlo sample fell inside the nilpotent ball");
  const double box = e.ball_volume * static_cast<double>(inside.size()) / hits;
  const double two_q = std::ldexp(1.0, e.Q);
  e.estimate = two_q / (scale * e.ball_volume);

  Rng rng(mix_seed(seed, 61));
  std::vector<double> boot;
  for (int b = 0; b < 200; ++b) {
    std::size_t h = 0;
    for (std::size_t i = 0; i < inside.size(); ++i) h += inside[rng.index(inside.size())];
    double vol = box * static_cast<double>(std::max<std::size_t>(h, 1)) / static_cast<double>(inside.size());
    boot.push_back(two_q / (scale * vol));
  }
  std::sort(boot.begin(), boot.end());
  e.ci_low = boot[5];
  e.ci_high = boot[194];
  return e;
}

}  // namespace srvol

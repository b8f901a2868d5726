#include "srvol/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "srvol/errors.hpp"

namespace srvol {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw SyntaxError("empty rational");
  std::size_t start = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  bool seen_slash = false;
  bool digits_before = false, digits_after = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] == '/') {
      if (seen_slash) throw SyntaxError("malformed rational '" + s + "'");
      seen_slash = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      (seen_slash ? digits_after : digits_before) = true;
    } else {
      throw SyntaxError("malformed rational '" + s + "'");
    }
  }
  if (!digits_before || (seen_slash && !digits_after)) throw SyntaxError("malformed rational '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw SyntaxError("malformed rational '" + s + "'");
  if (r.get_den() == 0) throw SyntaxError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::vector<std::string> default_names(std::size_t n, std::string_view prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(prefix) + std::to_string(i + 1));
  return names;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  if (i >= nvars) throw IndexOutOfRange("variable " + std::to_string(i) + " of " + std::to_string(nvars));
  Exponent e(nvars, 0);
  e[i] = 1;
  return monomial(std::move(e), 1);
}

Polynomial Polynomial::monomial(Exponent e, const Rational& c) {
  Polynomial p(e.size());
  p.add_term(e, c);
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
}

void Polynomial::add_term(const Exponent& e, const Rational& coeff) {
  if (e.size() != nvars_) throw DimensionMismatch("exponent length differs from nvars");
  if (coeff == 0) return;
  Rational c = coeff;
  c.canonicalize();
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial sum with different nvars");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial difference with different nvars");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  Rational k = c;
  k.canonicalize();
  for (auto& [e, v] : terms_) v *= k;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw DimensionMismatch("polynomial product with different nvars");
  Polynomial r(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Rational Polynomial::eval(std::span<const Rational> x) const {
  if (x.size() != nvars_)
    throw DimensionMismatch("evaluation point has " + std::to_string(x.size()) + " coordinates, expected " +
                            std::to_string(nvars_));
  Rational sum = 0;
  Rational term;
  mpz_class pw;
  for (const auto& [e, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      Rational f;
      mpz_pow_ui(f.get_num_mpz_t(), x[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(f.get_den_mpz_t(), x[i].get_den_mpz_t(), e[i]);
      term *= f;
    }
    sum += term;
  }
  sum.canonicalize();
  return sum;
}

double Polynomial::eval(std::span<const double> x) const {
  if (x.size() != nvars_)
    throw DimensionMismatch("evaluation point has " + std::to_string(x.size()) + " coordinates, expected " +
                            std::to_string(nvars_));
  double sum = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::partial(std::size_t i) const {
  if (i >= nvars_) throw IndexOutOfRange("partial derivative index " + std::to_string(i + 1) + " > " + std::to_string(nvars_));
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent d = e;
    --d[i];
    r.add_term(d, c * e[i]);
  }
  return r;
}

Polynomial Polynomial::shift(std::span<const Rational> p) const {
  if (p.size() != nvars_) throw DimensionMismatch("shift point arity");
  std::vector<Polynomial> values;
  values.reserve(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i)
    values.push_back(variable(nvars_, i) + constant(nvars_, p[i]));
  return compose(values);
}

Polynomial Polynomial::compose(std::span<const Polynomial> values) const {
  if (values.size() != nvars_) throw DimensionMismatch("composition arity");
  const std::size_t out_vars = values.empty() ? 0 : values[0].nvars();
  for (const auto& v : values)
    if (v.nvars() != out_vars) throw DimensionMismatch("composition values differ in nvars");
  // powers[i][k] = values[i]^k, filled lazily
  std::vector<std::vector<Polynomial>> powers(nvars_);
  auto power = [&](std::size_t i, int k) -> const Polynomial& {
    auto& pw = powers[i];
    if (pw.empty()) pw.push_back(constant(out_vars, 1));
    while (static_cast<int>(pw.size()) <= k) pw.push_back(pw.back() * values[i]);
    return pw[static_cast<std::size_t>(k)];
  };
  Polynomial r(out_vars);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(out_vars, c);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i] > 0) t = t * power(i, e[i]);
    r += t;
  }
  return r;
}

Polynomial Polynomial::truncate(int max_degree) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (auto k : e) d += k;
    if (d <= max_degree) r.terms_.emplace(e, c);
  }
  return r;
}

int Polynomial::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (auto k : e) d += k;
    best = std::max(best, d);
  }
  return best;
}

int Polynomial::min_degree() const {
  if (terms_.empty()) return -1;
  int best = INT32_MAX;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (auto k : e) d += k;
    best = std::min(best, d);
  }
  return best;
}

namespace {
int weighted(const Exponent& e, std::span<const int> w) {
  int d = 0;
  for (std::size_t i = 0; i < e.size(); ++i) d += w[i] * e[i];
  return d;
}
}  // namespace

int Polynomial::min_weighted_degree(std::span<const int> weights) const {
  if (weights.size() != nvars_) throw DimensionMismatch("weight vector arity");
  if (terms_.empty()) return -1;
  int best = INT32_MAX;
  for (const auto& [e, c] : terms_) best = std::min(best, weighted(e, weights));
  return best;
}

int Polynomial::max_weighted_degree(std::span<const int> weights) const {
  if (weights.size() != nvars_) throw DimensionMismatch("weight vector arity");
  int best = -1;
  for (const auto& [e, c] : terms_) best = std::max(best, weighted(e, weights));
  return best;
}

Polynomial Polynomial::weighted_part(std::span<const int> weights, int degree) const {
  if (weights.size() != nvars_) throw DimensionMismatch("weight vector arity");
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_)
    if (weighted(e, weights) == degree) r.terms_.emplace(e, c);
  return r;
}

Rational Polynomial::leading_coefficient() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->second;
}

Polynomial Polynomial::normalized() const {
  if (terms_.empty()) return *this;
  Rational inv = 1 / leading_coefficient();
  return *this * inv;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (names.size() < nvars_) throw DimensionMismatch("not enough variable names");
  if (terms_.empty()) return "0";
  // Graded order: higher total degree first, then lexicographically larger exponent first.
  std::vector<const TermMap::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  auto degree = [](const Exponent& e) {
    int d = 0;
    for (auto k : e) d += k;
    return d;
  };
  std::stable_sort(order.begin(), order.end(), [&](auto* a, auto* b) {
    int da = degree(a->first), db = degree(b->first);
    if (da != db) return da > db;
    return a->first > b->first;
  });
  std::string out;
  bool first = true;
  for (const auto* t : order) {
    const auto& [e, c] = *t;
    bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    bool unit = degree(e) > 0 && mag == 1;
    std::string body;
    if (!unit) body = mag.get_str();
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!body.empty()) body += " ";
      body += names[i];
      if (e[i] > 1) body += "^" + std::to_string(e[i]);
    }
    out += body;
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& names) : text_(text), names_(names) {}

  Polynomial run() {
    Polynomial result(names_.size());
    skip();
    if (at_end()) throw SyntaxError("empty polynomial");
    bool first = true;
    while (true) {
      skip();
      if (at_end()) break;
      Rational sign = 1;
      if (peek() == '+' || peek() == '-') {
        while (!at_end() && (peek() == '+' || peek() == '-')) {
          if (peek() == '-') sign = -sign;
          ++pos_;
          skip();
        }
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      term(result, sign);
    }
    return result;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  std::string digits() {
    std::string d;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) d.push_back(text_[pos_++]);
    return d;
  }

  void term(Polynomial& out, const Rational& sign) {
    skip();
    Rational coef = 1;
    bool any = false;
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      std::string num = digits();
      skip();
      if (!at_end() && peek() == '/') {
        ++pos_;
        skip();
        std::string den = digits();
        if (den.empty()) fail("expected denominator");
        num += "/" + den;
      }
      coef = parse_rational(num);
      any = true;
    }
    Exponent e(names_.size(), 0);
    while (true) {
      skip();
      if (at_end()) break;
      if (peek() == '*') {
        ++pos_;
        skip();
        if (at_end() || !std::isalpha(static_cast<unsigned char>(peek()))) fail("expected variable after '*'");
      }
      if (!std::isalpha(static_cast<unsigned char>(peek()))) break;
      std::size_t best = names_.size();
      std::size_t best_len = 0;
      for (std::size_t i = 0; i < names_.size(); ++i) {
        const auto& nm = names_[i];
        if (nm.size() > best_len && text_.substr(pos_, nm.size()) == nm) {
          best = i;
          best_len = nm.size();
        }
      }
      if (best == names_.size()) {
        std::size_t end = pos_;
        while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
        throw UnknownVariable("'" + std::string(text_.substr(pos_, end - pos_)) + "' in '" + std::string(text_) + "'");
      }
      pos_ += best_len;
      // a name immediately followed by more alphanumerics of an unknown identifier
      if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        std::size_t end = pos_;
        while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
        throw UnknownVariable("'" + names_[best] + std::string(text_.substr(pos_, end - pos_)) + "' in '" +
                              std::string(text_) + "'");
      }
      int power = 1;
      skip();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip();
        std::string d = digits();
        if (d.empty()) fail("expected exponent");
        power = std::stoi(d);
      }
      e[best] = static_cast<std::uint16_t>(e[best] + power);
      any = true;
    }
    if (!any) fail("expected term");
    out.add_term(e, sign * coef);
  }

  std::string_view text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, const std::vector<std::string>& names) {
  return Parser(text, names).run();
}

FloatPolynomial::FloatPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
  for (const auto& [e, c] : p.terms()) {
    coeffs_.push_back(c.get_d());
    exps_.insert(exps_.end(), e.begin(), e.end());
  }
}

double FloatPolynomial::operator()(std::span<const double> x) const {
  double sum = 0;
  const std::uint16_t* e = exps_.data();
  for (double c : coeffs_) {
    double t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    sum += t;
    e += nvars_;
  }
  return sum;
}

}  // namespace srvol

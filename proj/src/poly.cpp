#include "tangentia/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tangentia/errors.hpp"

namespace tangentia {

Monomial Monomial::unit(std::size_t nvars, std::size_t var, std::uint16_t power) {
  Monomial m(nvars);
  m.exps_.at(var) = power;
  return m;
}

int Monomial::degree() const {
  int d = 0;
  for (auto e : exps_) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.nvars() != nvars()) {
    throw DimensionMismatch("monomial product: variable counts differ");
  }
  Monomial out(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] += other.exps_[i];
  return out;
}

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da > db;
  return a.exponents() > b.exponents();
}

Polynomial Polynomial::constant(std::size_t nvars, Complex c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  if (i >= nvars) throw InvalidArgument("variable index out of range");
  Polynomial p(nvars);
  p.add_term(Monomial::unit(nvars, i), 1.0);
  return p;
}

void Polynomial::add_term(const Monomial& m, Complex c) {
  if (m.nvars() != nvars_) {
    throw DimensionMismatch("term has " + std::to_string(m.nvars()) + " variables, polynomial has " +
                            std::to_string(nvars_));
  }
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

Complex Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

Complex Polynomial::evaluate(std::span<const Complex> x) const {
  if (x.size() != nvars_) {
    throw DimensionMismatch("evaluate: expected " + std::to_string(nvars_) + " values, got " +
                            std::to_string(x.size()));
  }
  Complex sum = 0.0;
  for (const auto& [m, c] : terms_) {
    Complex t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (std::uint16_t k = 0; k < m[i]; ++k) t *= x[i];
    }
    sum += t;
  }
  return sum;
}

Complex Polynomial::evaluate(const CVector& x) const {
  return evaluate(std::span<const Complex>(x.data(), static_cast<std::size_t>(x.size())));
}

double Polynomial::evaluate_abs(const CVector& x) const {
  if (static_cast<std::size_t>(x.size()) != nvars_) {
    throw DimensionMismatch("evaluate_abs: dimension mismatch");
  }
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = std::abs(c);
    for (std::size_t i = 0; i < nvars_; ++i) t *= std::pow(std::abs(x(i)), m[i]);
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::differentiate(std::size_t i) const {
  if (i >= nvars_) {
    throw InvalidArgument("differentiate: variable index " + std::to_string(i) + " out of range");
  }
  Polynomial d(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial dm = m;
    dm[i] -= 1;
    d.add_term(dm, c * static_cast<double>(m[i]));
  }
  return d;
}

int Polynomial::total_degree() const {
  // Graded order puts the highest degree first.
  return terms_.empty() ? 0 : terms_.begin()->first.degree();
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = total_degree();
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& t) { return t.first.degree() == d; });
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
  if (subs.size() != nvars_) {
    throw DimensionMismatch("compose: need one substitute per variable");
  }
  const std::size_t target_vars = subs.empty() ? 0 : subs.front().nvars();
  for (const auto& s : subs) {
    if (s.nvars() != target_vars) throw DimensionMismatch("compose: substitutes disagree");
  }
  // powers[i][k] = subs[i]^k, filled lazily.
  std::vector<std::vector<Polynomial>> powers(nvars_);
  auto power = [&](std::size_t i, unsigned k) -> const Polynomial& {
    auto& table = powers[i];
    if (table.empty()) table.push_back(Polynomial::constant(target_vars, 1.0));
    while (table.size() <= k) table.push_back(table.back() * subs[i]);
    return table[k];
  };
  Polynomial out(target_vars);
  for (const auto& [m, c] : terms_) {
    Polynomial t = Polynomial::constant(target_vars, c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] > 0) t = t * power(i, m[i]);
    }
    out += t;
  }
  return out;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial out = Polynomial::constant(nvars_, 1.0);
  for (unsigned i = 0; i < k; ++i) out = out * *this;
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  double biggest = 0.0;
  for (const auto& [m, c] : terms_) biggest = std::max(biggest, std::abs(c));
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (std::abs(c) > tol * biggest) out.terms_.emplace(m, c);
  }
  return out;
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (o.nvars_ != nvars_) {
    throw DimensionMismatch("polynomials have " + std::to_string(nvars_) + " and " +
                            std::to_string(o.nvars_) + " variables");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex c) {
  if (c == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial out(a.nvars());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  out *= -1.0;
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 1) os << "*x" << i;
      if (m[i] > 1) os << "*x" << i << "^" << m[i];
    }
  }
  return os.str();
}

PolySystem::PolySystem(std::vector<Polynomial> polys) : polys_(std::move(polys)) {
  if (polys_.empty()) throw InvalidArgument("polynomial system must be nonempty");
  nvars_ = polys_.front().nvars();
  for (const auto& p : polys_) {
    if (p.nvars() != nvars_) throw DimensionMismatch("system polynomials disagree on nvars");
  }
}

std::vector<int> PolySystem::degrees() const {
  std::vector<int> d;
  d.reserve(polys_.size());
  for (const auto& p : polys_) d.push_back(p.total_degree());
  return d;
}

CVector evaluate(const PolySystem& s, const CVector& x) {
  CVector out(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) out(static_cast<Eigen::Index>(i)) = s[i].evaluate(x);
  return out;
}

CMatrix jacobian(const PolySystem& s, const CVector& x) {
  if (static_cast<std::size_t>(x.size()) != s.nvars()) {
    throw DimensionMismatch("jacobian: dimension mismatch");
  }
  CMatrix J(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.nvars()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.nvars(); ++j) {
      J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          s[i].differentiate(j).evaluate(x);
    }
  }
  return J;
}

AffinePatch::AffinePatch(CVector l) : functional(std::move(l)) {
  if (functional.size() == 0 || functional.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidArgument("affine patch functional must be nonzero");
  }
  Eigen::Index idx = 0;
  functional.cwiseAbs().maxCoeff(&idx);
  eliminated = static_cast<std::size_t>(idx);
}

AffinePatch AffinePatch::coordinate(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw InvalidArgument("patch index out of range");
  CVector l = CVector::Zero(static_cast<Eigen::Index>(nvars));
  l(static_cast<Eigen::Index>(index)) = 1.0;
  return AffinePatch(l);
}

CVector AffinePatch::lift(const CVector& x) const {
  const Eigen::Index n = functional.size();
  if (x.size() != n - 1) throw DimensionMismatch("patch lift: dimension mismatch");
  const auto k = static_cast<Eigen::Index>(eliminated);
  CVector v(n);
  Complex acc = 1.0;
  for (Eigen::Index i = 0, j = 0; i < n; ++i) {
    if (i == k) continue;
    v(i) = x(j++);
    acc -= functional(i) * v(i);
  }
  v(k) = acc / functional(k);
  return v;
}

CVector AffinePatch::project(const CVector& v) const {
  const Eigen::Index n = functional.size();
  if (v.size() != n) throw DimensionMismatch("patch project: dimension mismatch");
  const Complex s = (functional.array() * v.array()).sum();
  if (s == Complex(0.0)) throw InvalidArgument("point lies on the hyperplane at infinity of the patch");
  CVector x(n - 1);
  for (Eigen::Index i = 0, j = 0; i < n; ++i) {
    if (i == static_cast<Eigen::Index>(eliminated)) continue;
    x(j++) = v(i) / s;
  }
  return x;
}

PolySystem substitute_affine_patch(const PolySystem& s, const AffinePatch& patch) {
  const std::size_t n = s.nvars();
  if (static_cast<std::size_t>(patch.functional.size()) != n) {
    throw DimensionMismatch("patch functional has wrong dimension");
  }
  if (n < 2) throw InvalidArgument("patching needs at least two variables");
  for (const auto& p : s.polys()) {
    if (!p.is_homogeneous()) throw InvalidArgument("substitute_affine_patch: non-homogeneous input");
  }
  const std::size_t k = patch.eliminated;
  const Complex lk = patch.functional(static_cast<Eigen::Index>(k));
  std::vector<Polynomial> subs;
  subs.reserve(n);
  Polynomial eliminated = Polynomial::constant(n - 1, 1.0 / lk);
  for (std::size_t i = 0, j = 0; i < n; ++i) {
    if (i == k) {
      subs.emplace_back(n - 1);
      continue;
    }
    const Complex li = patch.functional(static_cast<Eigen::Index>(i));
    eliminated -= Polynomial::variable(n - 1, j) * (li / lk);
    subs.push_back(Polynomial::variable(n - 1, j));
    ++j;
  }
  subs[k] = eliminated;
  std::vector<Polynomial> out;
  out.reserve(s.size());
  for (const auto& p : s.polys()) out.push_back(p.compose(subs));
  return PolySystem(std::move(out));
}

CompiledSystem::CompiledSystem(const PolySystem& s) : nvars_(s.nvars()) {
  if (nvars_ >= 32) throw InvalidArgument("CompiledSystem supports at most 31 variables");
  for (const auto& p : s.polys()) {
    Poly cp{static_cast<std::uint32_t>(terms_.size()), static_cast<std::uint32_t>(p.term_count())};
    for (const auto& [m, c] : p.terms()) {
      Term t{c, static_cast<std::uint32_t>(factors_.size()), 0};
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        factors_.push_back(Factor{static_cast<std::uint32_t>(i), m[i]});
        max_exp_ = std::max<int>(max_exp_, m[i]);
        ++t.count;
      }
      terms_.push_back(t);
    }
    polys_.push_back(cp);
  }
}

void CompiledSystem::evaluate(const CVector& x, CVector& values) const {
  values.resize(static_cast<Eigen::Index>(polys_.size()));
  for (std::size_t p = 0; p < polys_.size(); ++p) {
    Complex sum = 0.0;
    for (std::uint32_t t = polys_[p].first; t < polys_[p].first + polys_[p].count; ++t) {
      Complex val = terms_[t].coeff;
      for (std::uint32_t f = terms_[t].first; f < terms_[t].first + terms_[t].count; ++f) {
        const Complex xi = x(factors_[f].var);
        for (std::uint32_t e = 0; e < factors_[f].exp; ++e) val *= xi;
      }
      sum += val;
    }
    values(static_cast<Eigen::Index>(p)) = sum;
  }
}

void CompiledSystem::evaluate(const CVector& x, CVector& values, CMatrix& jac) const {
  const auto n = static_cast<Eigen::Index>(nvars_);
  values.resize(static_cast<Eigen::Index>(polys_.size()));
  jac.setZero(static_cast<Eigen::Index>(polys_.size()), n);
  // powers(e, i) = x_i^e
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> powers(max_exp_ + 1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    powers(0, i) = 1.0;
    for (int e = 1; e <= max_exp_; ++e) powers(e, i) = powers(e - 1, i) * x(i);
  }
  Complex prefix[32];
  for (std::size_t p = 0; p < polys_.size(); ++p) {
    Complex sum = 0.0;
    const auto row = static_cast<Eigen::Index>(p);
    for (std::uint32_t t = polys_[p].first; t < polys_[p].first + polys_[p].count; ++t) {
      const Term& term = terms_[t];
      const Factor* fs = factors_.data() + term.first;
      const std::uint32_t k = term.count;
      // prefix[j] = product of the first j factors
      prefix[0] = 1.0;
      for (std::uint32_t j = 0; j < k; ++j) prefix[j + 1] = prefix[j] * powers(fs[j].exp, fs[j].var);
      sum += term.coeff * prefix[k];
      Complex suffix = 1.0;
      for (std::uint32_t j = k; j-- > 0;) {
        const Complex d = static_cast<double>(fs[j].exp) * powers(fs[j].exp - 1, fs[j].var);
        jac(row, fs[j].var) += term.coeff * prefix[j] * d * suffix;
        suffix *= powers(fs[j].exp, fs[j].var);
      }
    }
    values(row) = sum;
  }
}

void CompiledSystem::coefficient_scale(double m, Eigen::VectorXd& scale) const {
  scale.resize(static_cast<Eigen::Index>(polys_.size()));
  for (std::size_t p = 0; p < polys_.size(); ++p) {
    double sum = 0.0;
    for (std::uint32_t t = polys_[p].first; t < polys_[p].first + polys_[p].count; ++t) {
      int degree = 0;
      for (std::uint32_t f = terms_[t].first; f < terms_[t].first + terms_[t].count; ++f) {
        degree += static_cast<int>(factors_[f].exp);
      }
      sum += std::abs(terms_[t].coeff) * std::pow(m, degree);
    }
    scale(static_cast<Eigen::Index>(p)) = sum;
  }
}

}  // namespace tangentia

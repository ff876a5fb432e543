#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tangentia/core.hpp"

namespace tangentia {

// Exponent vector, one entry per variable.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint16_t> exps) : exps_(std::move(exps)) {}

  static Monomial unit(std::size_t nvars, std::size_t var, std::uint16_t power = 1);

  std::size_t nvars() const { return exps_.size(); }
  std::uint16_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint16_t& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<std::uint16_t>& exponents() const { return exps_; }
  int degree() const;

  Monomial operator*(const Monomial& other) const;
  bool operator==(const Monomial& other) const = default;

 private:
  std::vector<std::uint16_t> exps_;
};

// Graded lexicographic: higher total degree first, then lexicographic with
// x_0 > x_1 > ... . Gives a deterministic term order.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse polynomial with complex double coefficients. Zero coefficients are
// never stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Complex, GradedLex>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Complex c);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Adds c * m, dropping the term if the sum is exactly zero.
  void add_term(const Monomial& m, Complex c);
  Complex coefficient(const Monomial& m) const;

  Complex evaluate(std::span<const Complex> x) const;
  Complex evaluate(const CVector& x) const;
  // sum |c| prod |x_i|^e_i, the natural scale for relative residuals.
  double evaluate_abs(const CVector& x) const;

  Polynomial differentiate(std::size_t i) const;
  int total_degree() const;
  bool is_homogeneous() const;

  // Replaces x_i by subs[i]; all substitutes share one variable count.
  Polynomial compose(const std::vector<Polynomial>& subs) const;
  Polynomial pow(unsigned k) const;

  // Drops terms with |c| <= tol * max |c|.
  Polynomial pruned(double tol) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(Complex c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex c) { return a *= c; }
  friend Polynomial operator*(Complex c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;

  std::string to_string() const;

 private:
  void check_compatible(const Polynomial& o) const;

  std::size_t nvars_;
  TermMap terms_;
};

class PolySystem {
 public:
  PolySystem() = default;
  explicit PolySystem(std::vector<Polynomial> polys);

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return polys_.size(); }
  bool is_square() const { return polys_.size() == nvars_; }
  const Polynomial& operator[](std::size_t i) const { return polys_[i]; }
  const std::vector<Polynomial>& polys() const { return polys_; }
  std::vector<int> degrees() const;

 private:
  std::size_t nvars_ = 0;
  std::vector<Polynomial> polys_;
};

CVector evaluate(const PolySystem& s, const CVector& x);
CMatrix jacobian(const PolySystem& s, const CVector& x);

// Dehomogenization on the affine chart l(v) = 1. The variable with the
// largest |l_i| is eliminated.
struct AffinePatch {
  CVector functional;
  std::size_t eliminated = 0;

  explicit AffinePatch(CVector l);
  static AffinePatch coordinate(std::size_t nvars, std::size_t index);

  // Homogeneous point with l(v) = 1 from chart coordinates.
  CVector lift(const CVector& x) const;
  // Chart coordinates of a homogeneous point; rescales so l(v) = 1.
  CVector project(const CVector& v) const;
};

// Throws InvalidArgument for non-homogeneous input.
PolySystem substitute_affine_patch(const PolySystem& s, const AffinePatch& patch);

// Flattened term lists for repeated evaluation of values and Jacobians.
class CompiledSystem {
 public:
  CompiledSystem() = default;
  explicit CompiledSystem(const PolySystem& s);

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return polys_.size(); }

  void evaluate(const CVector& x, CVector& values) const;
  void evaluate(const CVector& x, CVector& values, CMatrix& jac) const;
  // Per-equation scale sum |c| m^deg for relative residuals, m a bound on
  // the coordinates. Unlike sum |c| |x^e| it does not vanish at roots of
  // monomial equations.
  void coefficient_scale(double m, Eigen::VectorXd& scale) const;

 private:
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
  };
  struct Term {
    Complex coeff;
    std::uint32_t first;
    std::uint32_t count;
  };
  struct Poly {
    std::uint32_t first;
    std::uint32_t count;
  };

  std::size_t nvars_ = 0;
  int max_exp_ = 0;
  std::vector<Poly> polys_;
  std::vector<Term> terms_;
  std::vector<Factor> factors_;
};

}  // namespace tangentia

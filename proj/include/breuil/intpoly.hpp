#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace breuil {

/// Exact polynomial with integer coefficients in a fixed list of variables.
/// Used for parsed input (E, window entries) before it is mapped into a
/// truncated ring.
class IntPoly {
 public:
  using Exponents = std::vector<int>;

  explicit IntPoly(int nvars = 0) : nvars_(nvars) {}

  static IntPoly constant(int nvars, const mpz_class& c);
  static IntPoly variable(int nvars, int index);

  int nvars() const noexcept { return nvars_; }
  const std::map<Exponents, mpz_class>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Coefficient of the given monomial (zero if absent).
  mpz_class coeff(const Exponents& exps) const;
  void add_term(const Exponents& exps, const mpz_class& c);

  /// Largest exponent of variable `index` over all terms (-1 for the zero polynomial).
  int degree_in(int index) const;

  IntPoly operator+(const IntPoly& other) const;
  IntPoly operator-(const IntPoly& other) const;
  IntPoly operator*(const IntPoly& other) const;
  IntPoly operator-() const;
  IntPoly pow(unsigned k) const;

  bool operator==(const IntPoly& other) const = default;

 private:
  int nvars_;
  std::map<Exponents, mpz_class> terms_;
};

/// Parses an integer polynomial such as "u^2 + 3*t1*u - 3(1+t1)".
/// Grammar: sums of products of integers, variables and parenthesised
/// expressions, with '^' for non-negative integer powers; juxtaposition means
/// multiplication. `line` and `column` locate the text in its enclosing file
/// so that errors are reported positionally.
IntPoly parse_int_poly(std::string_view text, const std::vector<std::string>& vars, int line = 1,
                       int column = 1);

}  // namespace breuil

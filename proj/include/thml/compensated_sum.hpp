#pragma once

#include <cmath>
#include <complex>

namespace thml {

// Neumaier's variant of Kahan summation. Works for double and for the
// boost multiprecision floats used by the precision ladder.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& term) {
    using std::abs;
    const Real t = sum_ + term;
    if (abs(sum_) >= abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(const Real& term) {
    add(term);
    return *this;
  }

  Real value() const { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

template <class Real>
class CompensatedComplexSum {
 public:
  void add(const std::complex<Real>& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(const Real& re, const Real& im) {
    re_.add(re);
    im_.add(im);
  }
  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace thml

#pragma once

#include <cmath>
#include <complex>

// Nested Horner kernels for the one-variable series sum_k a_k z^k / sqrt(k!).
// `is` is the 1/sqrt(k) table; the recursion b_k = a_k + b_{k+1} z / sqrt(k+1) never
// forms 1/sqrt(k!) explicitly, so it cannot underflow for large k.

namespace bfholes::detail {

struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline double horner(const double* a, const double* is, int n, double x) {
  double b = a[n];
  for (int k = n - 1; k >= 0; --k) b = a[k] + b * x * is[k + 1];
  return b;
}

inline std::complex<double> horner(const double* a, const double* is, int n, std::complex<double> z) {
  double br = a[n], bi = 0.0;
  const double zr = z.real(), zi = z.imag();
  for (int k = n - 1; k >= 0; --k) {
    const double s = is[k + 1];
    const double nr = a[k] + (br * zr - bi * zi) * s;
    const double ni = (br * zi + bi * zr) * s;
    br = nr;
    bi = ni;
  }
  return {br, bi};
}

inline Jet horner_jet(const double* a, const double* is, int n, double x) {
  double b = a[n], b1 = 0.0, b2 = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double s = is[k + 1];
    b2 = (2.0 * b1 + x * b2) * s;
    b1 = (b + x * b1) * s;
    b = a[k] + b * x * s;
  }
  return {b, b1, b2};
}

// Value and first derivative only.
inline void horner_d1(const double* a, const double* is, int n, double x, double& v, double& d1) {
  double b = a[n], b1 = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double s = is[k + 1];
    b1 = (b + x * b1) * s;
    b = a[k] + b * x * s;
  }
  v = b;
  d1 = b1;
}

// sum |a_k| X^k / sqrt(k!) and its first two X-derivatives: bounds for |psi|, |psi'|,
// |psi''| on |x| <= X.
inline Jet abs_jet(const double* a, const double* is, int n, double x) {
  double b = std::abs(a[n]), b1 = 0.0, b2 = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double s = is[k + 1];
    b2 = (2.0 * b1 + x * b2) * s;
    b1 = (b + x * b1) * s;
    b = std::abs(a[k]) + b * x * s;
  }
  return {b, b1, b2};
}

// sum |a_k| d^3/dX^3 (X^k) / sqrt(k!).
inline double abs_d3(const double* a, const double* is, int n, double x) {
  double b = std::abs(a[n]), b1 = 0.0, b2 = 0.0, b3 = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double s = is[k + 1];
    b3 = (3.0 * b2 + x * b3) * s;
    b2 = (2.0 * b1 + x * b2) * s;
    b1 = (b + x * b1) * s;
    b = std::abs(a[k]) + b * x * s;
  }
  return b3;
}

// Complex value and derivative, with the multiplications spelled out.
inline void horner_d1(const double* a, const double* is, int n, std::complex<double> z, std::complex<double>& v,
                      std::complex<double>& d1) {
  const double zr = z.real(), zi = z.imag();
  double br = a[n], bi = 0.0, dr = 0.0, di = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double s = is[k + 1];
    const double ndr = (br + dr * zr - di * zi) * s;
    const double ndi = (bi + dr * zi + di * zr) * s;
    const double nbr = a[k] + (br * zr - bi * zi) * s;
    const double nbi = (br * zi + bi * zr) * s;
    dr = ndr;
    di = ndi;
    br = nbr;
    bi = nbi;
  }
  v = {br, bi};
  d1 = {dr, di};
}

}  // namespace bfholes::detail

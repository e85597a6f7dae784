#pragma once

// Angular momentum algebra: ladder coefficients, Wigner 3-j symbols (Racah
// sum formula, adequate for the small j used here) and matrix elements of the
// Racah spherical tensors C_{k,q} between |N, M> rotational states.

#include <cmath>
#include <stdexcept>

namespace molgate::angular {

// sqrt(j(j+1) - m(m+1)), coefficient of the raising operator J+ |j m>.
inline double ladder_plus(double j, double m) {
  const double arg = j * (j + 1.0) - m * (m + 1.0);
  return arg > 0.0 ? std::sqrt(arg) : 0.0;
}

// sqrt(j(j+1) - m(m-1)), coefficient of J- |j m>.
inline double ladder_minus(double j, double m) {
  const double arg = j * (j + 1.0) - m * (m - 1.0);
  return arg > 0.0 ? std::sqrt(arg) : 0.0;
}

namespace detail {

inline long double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= static_cast<long double>(i);
  return f;
}

inline bool is_twice_integer(double x) {
  return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-9;
}

}  // namespace detail

// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3). Accepts integer and half-integer
// arguments; returns 0 when selection rules fail.
inline double wigner3j(double j1, double j2, double j3, double m1, double m2,
                       double m3) {
  using detail::factorial;
  if (!detail::is_twice_integer(j1) || !detail::is_twice_integer(j2) ||
      !detail::is_twice_integer(j3) || !detail::is_twice_integer(m1) ||
      !detail::is_twice_integer(m2) || !detail::is_twice_integer(m3))
    throw std::invalid_argument("wigner3j: arguments must be multiples of 1/2");

  if (std::abs(m1 + m2 + m3) > 1e-9) return 0.0;
  if (j3 < std::abs(j1 - j2) - 1e-9 || j3 > j1 + j2 + 1e-9) return 0.0;
  if (std::abs(m1) > j1 + 1e-9 || std::abs(m2) > j2 + 1e-9 ||
      std::abs(m3) > j3 + 1e-9)
    return 0.0;

  const auto iround = [](double x) { return static_cast<int>(std::llround(x)); };
  const int a1 = iround(j1 + j2 - j3);
  const int a2 = iround(j1 - j2 + j3);
  const int a3 = iround(-j1 + j2 + j3);
  const int b1 = iround(j1 - m1);
  const int b2 = iround(j1 + m1);
  const int b3 = iround(j2 - m2);
  const int b4 = iround(j2 + m2);
  const int b5 = iround(j3 - m3);
  const int b6 = iround(j3 + m3);
  if (a1 < 0 || a2 < 0 || a3 < 0) return 0.0;

  const long double delta =
      factorial(a1) * factorial(a2) * factorial(a3) /
      factorial(iround(j1 + j2 + j3) + 1);
  const long double pref =
      std::sqrt(delta * factorial(b1) * factorial(b2) * factorial(b3) *
                factorial(b4) * factorial(b5) * factorial(b6));

  const int kmin = std::max({0, iround(j2 - j3 - m1), iround(j1 - j3 + m2)});
  const int kmax = std::min({a1, b1, b4});
  long double sum = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    const long double den = factorial(k) * factorial(a1 - k) *
                            factorial(b1 - k) * factorial(b4 - k) *
                            factorial(iround(j3 - j2 + m1) + k) *
                            factorial(iround(j3 - j1 - m2) + k);
    sum += ((k % 2 == 0) ? 1.0L : -1.0L) / den;
  }
  const int phase_pow = iround(j1 - j2 - m3);
  const double phase = (((phase_pow % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
  return static_cast<double>(phase * pref * sum);
}

// <N' M' | C_{k,q} | N M> with C_{k,q} = sqrt(4 pi / (2k+1)) Y_{k,q}.
inline double ckq_element(int n_prime, int m_prime, int k, int q, int n,
                          int m) {
  if (m_prime != m + q) return 0.0;
  const double w0 = wigner3j(n_prime, k, n, 0, 0, 0);
  if (w0 == 0.0) return 0.0;
  const double wm = wigner3j(n_prime, k, n, -m_prime, q, m);
  const double phase = ((m_prime % 2) + 2) % 2 == 0 ? 1.0 : -1.0;
  return phase * std::sqrt((2.0 * n_prime + 1.0) * (2.0 * n + 1.0)) * w0 * wm;
}

// Diagonal tensor element <N M | C_{2,0} | N M> = (N(N+1) - 3M^2) /
// ((2N-1)(2N+3)); kept as an independent closed form for testing.
inline double c20_diagonal(int n, int m) {
  if (n == 0) return 0.0;
  return (n * (n + 1.0) - 3.0 * m * m) / ((2.0 * n - 1.0) * (2.0 * n + 3.0));
}

}  // namespace molgate::angular

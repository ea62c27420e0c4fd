#include "stability.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "error.hpp"

namespace ccdf {
namespace {

using boost::multiprecision::cpp_int;
using Int128 = __int128;

Rational pow10(int e) {
  cpp_int p = 1;
  for (int i = 0; i < std::abs(e); ++i) p *= 10;
  return e >= 0 ? Rational(p) : Rational(cpp_int(1), p);
}

[[noreturn]] void bad_number(std::string_view text) {
  fail(ErrorKind::invalid_argument, "not a rational number: '" + std::string(text) + "'");
}

// Smallest integer m >= 0 with m^2 >= x.
int ceil_sqrt(const Rational& x) {
  if (x <= 0) return 0;
  int m = static_cast<int>(std::floor(std::sqrt(to_double(x))));
  m = std::max(m - 1, 0);
  while (Rational(m) * m < x) ++m;
  return m;
}

// g(n/omega) as an exact fraction num/den with den > 0.
struct Fraction {
  Int128 num;
  Int128 den;
};

Fraction g_fraction(long long n, long long omega) {
  Int128 num = Int128(n) * n * (Int128(omega) * omega - Int128(n) * n);
  Int128 den = Int128(omega) * omega * (4 * Int128(omega) * omega - 3 * Int128(n) * n);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return {num, den};
}

bool less(const Fraction& a, const Fraction& b) { return a.num * b.den < b.num * a.den; }

Rational to_rational(const Fraction& f) {
  auto to_cpp = [](Int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    cpp_int r = static_cast<unsigned long long>(u >> 64);
    r <<= 64;
    r += static_cast<unsigned long long>(u & 0xffffffffffffffffULL);
    return neg ? cpp_int(-r) : r;
  };
  return Rational(to_cpp(f.num), to_cpp(f.den));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
  if (s.empty()) bad_number(text);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) bad_number(text);
    return num / den;
  }
  size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  cpp_int digits = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    const char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits = digits * 10 + (ch - '0');
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) bad_number(text);
  int exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') bad_number(text);
    ++i;
    size_t used = 0;
    try {
      exponent = std::stoi(s.substr(i), &used);
    } catch (const std::exception&) {
      bad_number(text);
    }
    if (used != s.size() - i || std::abs(exponent) > 4000) bad_number(text);
  }
  Rational value = Rational(digits) * pow10(exponent - frac_digits);
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

double symbol(double x, double c) {
  const double x2 = x * x;
  return 2.0 * x2 * x2 - (6.0 * c + 2.0) * x2 + 8.0 * c;
}

Rational symbol(const Rational& x, const Rational& c) {
  const Rational x2 = x * x;
  return 2 * x2 * x2 - (6 * c + 2) * x2 + 8 * c;
}

int lambda_search_bound(const Rational& c, int omega) {
  const Rational half = (3 * c + 1) / 2;
  const int root = ceil_sqrt(half > 0 ? half : Rational(0));
  return std::max(omega + 2, omega * root + omega + 2);
}

int lambda_search_bound(double c, int omega) {
  const double half = std::max(0.0, (3.0 * c + 1.0) / 2.0);
  const int root = static_cast<int>(std::ceil(std::sqrt(half)));
  return std::max(omega + 2, omega * root + omega + 2);
}

LambdaHat lambda_hat(double c, int omega, int extra_search) {
  if (omega < 1) fail(ErrorKind::domain, "lambda_hat needs omega >= 1");
  const int n_max = lambda_search_bound(c, omega) + std::max(extra_search, 0);
  LambdaHat best{std::numeric_limits<double>::infinity(), 0};
  for (int n = 1; n <= n_max; ++n) {
    if (n == omega) continue;
    const double v = symbol(static_cast<double>(n) / omega, c);
    if (v < best.value) best = {v, n};
  }
  return best;
}

ExactLambdaHat lambda_hat(const Rational& c, int omega, int extra_search) {
  if (omega < 1) fail(ErrorKind::domain, "lambda_hat needs omega >= 1");
  const int n_max = lambda_search_bound(c, omega) + std::max(extra_search, 0);
  std::optional<ExactLambdaHat> best;
  for (int n = 1; n <= n_max; ++n) {
    if (n == omega) continue;
    Rational v = symbol(Rational(n, omega), c);
    if (!best || v < best->value) best = ExactLambdaHat{std::move(v), n};
  }
  return *best;
}

double Thresholds::c_minus_value() const {
  return c_minus ? to_double(*c_minus) : -std::numeric_limits<double>::infinity();
}

double Thresholds::c_plus_value() const { return to_double(c_plus); }

Thresholds thresholds(int omega) {
  if (omega < 1) fail(ErrorKind::domain, "thresholds need omega >= 1");
  Thresholds t;
  std::optional<Fraction> best_minus;
  for (int n = 1; n <= omega - 1; ++n) {
    const auto g = g_fraction(n, omega);
    if (!best_minus || less(*best_minus, g)) {
      best_minus = g;
      t.c_minus_mode = n;
    }
  }
  if (best_minus) t.c_minus = to_rational(*best_minus);

  // First n with 3n^2 > 4 omega^2. g is increasing on (sqrt2, inf), so the scan
  // stops at the first n with n^2 > 2 omega^2 whose value exceeds the minimum.
  const long long w = omega;
  long long n = static_cast<long long>(std::floor(2.0 * omega / std::sqrt(3.0)));
  while (3 * n * n <= 4 * w * w) ++n;
  std::optional<Fraction> best_plus;
  for (;; ++n) {
    const auto g = g_fraction(n, omega);
    if (!best_plus || less(g, *best_plus)) {
      best_plus = g;
      t.c_plus_mode = static_cast<int>(n);
    } else if (n * n > 2 * w * w) {
      break;
    }
  }
  t.c_plus = to_rational(*best_plus);
  return t;
}

SymbolRoots symbol_roots(double c) {
  if (!((c > 0.0 && c < 1.0 / 9.0) || c > 1.0)) {
    std::ostringstream os;
    os << "symbol roots are real and distinct only for c in (0,1/9) or (1,inf); got c = " << c;
    fail(ErrorKind::domain, os.str());
  }
  const double disc = std::sqrt((c - 1.0) * (9.0 * c - 1.0));
  return {std::sqrt((3.0 * c + 1.0 - disc) / 2.0), std::sqrt((3.0 * c + 1.0 + disc) / 2.0)};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::borderline: return "borderline";
  }
  return "borderline";
}

Verdict classify(double value, double eps) {
  if (std::abs(value) <= eps) return Verdict::borderline;
  return value > 0.0 ? Verdict::stable : Verdict::unstable;
}

Verdict classify(const Rational& value) {
  if (value == 0) return Verdict::borderline;
  return value > 0 ? Verdict::stable : Verdict::unstable;
}

std::vector<int> stable_omegas(const Rational& c, int omega_max) {
  std::vector<int> out;
  for (int w = 1; w <= omega_max; ++w) {
    if (lambda_hat(c, w).value > 0) out.push_back(w);
  }
  return out;
}

std::vector<int> stable_omegas_lattice(double c, int omega_max) {
  const auto r = symbol_roots(c);
  std::vector<int> out;
  for (int w = 1; w <= omega_max; ++w) {
    const long long lo = static_cast<long long>(std::ceil(w * r.r_minus));
    const long long hi = static_cast<long long>(std::floor(w * r.r_plus));
    bool hit = false;
    for (long long n = std::max(lo, 1LL); n <= hi && !hit; ++n) hit = n != w;
    if (!hit) out.push_back(w);
  }
  return out;
}

StabilityReport stability_report(const Rational& c, int omega) {
  StabilityReport rep;
  rep.c = c;
  rep.omega = omega;
  auto lh = lambda_hat(c, omega);
  rep.lambda_hat_exact = lh.value;
  rep.lambda_hat = to_double(lh.value);
  rep.argmin_n = lh.argmin_n;
  rep.verdict = classify(lh.value);
  rep.thresholds = thresholds(omega);
  const double cd = to_double(c);
  if ((cd > 0.0 && cd < 1.0 / 9.0) || cd > 1.0) rep.roots = symbol_roots(cd);
  return rep;
}

StabilityGrid stability_region_grid(double c_min, double c_max, int omega_max, int resolution, int threads) {
  if (resolution < 2) fail(ErrorKind::invalid_argument, "grid resolution must be >= 2");
  if (omega_max < 1) fail(ErrorKind::invalid_argument, "omega_max must be >= 1");
  if (!(c_max > c_min)) fail(ErrorKind::invalid_argument, "grid needs c_min < c_max");
  StabilityGrid grid;
  grid.c_values.resize(resolution);
  for (int i = 0; i < resolution; ++i) grid.c_values[i] = c_min + (c_max - c_min) * i / (resolution - 1);
  grid.rows.resize(omega_max);

  auto fill_row = [&](int w) {
    StabilityRow row;
    row.omega = w;
    const auto t = thresholds(w);
    row.c_minus = t.c_minus_value();
    row.c_plus = t.c_plus_value();
    row.stable.resize(resolution);
    for (int i = 0; i < resolution; ++i) {
      row.stable[i] = classify(lambda_hat(grid.c_values[i], w).value) == Verdict::stable;
    }
    grid.rows[w - 1] = std::move(row);
  };

  const int workers = std::clamp(threads, 1, omega_max);
  if (workers == 1) {
    for (int w = 1; w <= omega_max; ++w) fill_row(w);
    return grid;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (int w = 1 + t; w <= omega_max; w += workers) fill_row(w);
    });
  }
  for (auto& th : pool) th.join();
  return grid;
}

}  // namespace ccdf

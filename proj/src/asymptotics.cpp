#include "unidense/asymptotics.hpp"

#include <cmath>
#include <sstream>

namespace unidense {

namespace {

constexpr double kXCap = 1e300;   // largest position handled in real space
constexpr double kTCap = 688.0;   // largest log-space horizon (e^688 < 1e300)

}  // namespace

// ---------------------------------------------------------------------------
// sum of log((n q + b)/(n q + a)) over n in [n1, n2)
// ---------------------------------------------------------------------------

namespace {

double lrs_f(double n, double q, double a, double b) {
  return std::log1p((b - a) / (n * q + a));
}

// (u+b)log(u+b) - (u+a)log(u+a) in a cancellation-free arrangement
double lrs_G(double u, double a, double b) {
  return (u + a) * std::log1p((b - a) / (u + a)) + (b - a) * std::log(u + b);
}

double lrs_fp(double n, double q, double a, double b) {
  double x = n * q + a, y = n * q + b;
  return -q * (b - a) / (x * y);
}

double lrs_fppp(double n, double q, double a, double b) {
  double x = n * q + a, y = n * q + b;
  double num = y * y + x * y + x * x;
  return -2.0 * q * q * q * (b - a) * num / (x * x * x * y * y * y);
}

}  // namespace

double log_ratio_sum(double q, double a, double b, double n1, double n2) {
  if (!(n2 > n1) || !(b > a)) return 0.0;
  double total = 0.0;
  double m = n1;
  if (n1 < 9.0e15) {
    double direct_end = std::min(n2, n1 + 4096.0);
    for (double n = n1; n < direct_end; n += 1.0) total += lrs_f(n, q, a, b);
    m = direct_end;
  }
  if (!(m < n2)) return total;
  double integral = (lrs_G(n2 * q, a, b) - lrs_G(m * q, a, b)) / q;
  double corr = 0.5 * (lrs_f(m, q, a, b) - lrs_f(n2, q, a, b)) +
                (lrs_fp(n2, q, a, b) - lrs_fp(m, q, a, b)) / 12.0 -
                (lrs_fppp(n2, q, a, b) - lrs_fppp(m, q, a, b)) / 720.0;
  return total + integral + corr;
}

// ---------------------------------------------------------------------------
// periodic-form helpers
// ---------------------------------------------------------------------------

namespace {

// Prefix of the pattern within one period, at offset r in [0, q].
double pat_prefix(const PeriodicForm& f, double r) {
  double s = 0.0;
  for (const auto& p : f.pattern) {
    if (r >= p.second) {
      s += p.second - p.first;
    } else {
      if (r > p.first) s += r - p.first;
      break;
    }
  }
  return s;
}

// Prefix of the unstarted periodic set on [0, z) (valid for any real z >= 0).
double periodic_F(const PeriodicForm& f, double z) {
  double n = std::floor((z - f.phase) / f.period);
  double r = z - f.phase - n * f.period;
  return n * f.pattern_measure + pat_prefix(f, r);
}

// integral of dv/(v + delta) over {v in set(f)} ∩ [w1, w2)
double periodic_weighted_integral(const PeriodicForm& f, double w1, double w2, double delta) {
  w1 = std::max(w1, f.start);
  if (!(w2 > w1)) return 0.0;
  double q = f.period;
  double total = 0.0;
  for (const auto& piece : f.pattern) {
    double a = f.phase + piece.first;
    double b = f.phase + piece.second;
    double n_lo = std::floor((w1 - b) / q);
    double n_hi = std::floor((w2 - a) / q) + 1.0;
    double nA = n_lo + 2.0, nB = n_hi - 2.0;
    if (nB > nA) {
      total += log_ratio_sum(q, a + delta, b + delta, nA, nB);
    } else {
      nA = n_lo;
      nB = n_lo;
    }
    auto add_clipped = [&](double n) {
      double lo = std::max(n * q + a, w1);
      double hi = std::min(n * q + b, w2);
      if (lo < hi) total += std::log((hi + delta) / (lo + delta));
    };
    for (double k = 0.0; k < nA - n_lo && k < 8.0; k += 1.0) add_clipped(n_lo + k);
    for (double k = 0.0; k <= n_hi - nB && k < 8.0; k += 1.0) add_clipped(nB + k);
  }
  return total;
}

// integral of dv / T(v) over v in [v1, v2), where T(v) is the position of the
// v-th unit of mass of the started periodic set (the inverse prefix function).
// voff is the unstarted-prefix value at the start point.
double periodic_inverse_integral(const PeriodicForm& f, double voff, double v1, double v2) {
  if (!(v2 > v1)) return 0.0;
  double p = f.pattern_measure, q = f.period;
  double w1 = v1 + voff, w2 = v2 + voff;
  double n1 = std::floor(w1 / p), n2 = std::floor(w2 / p);
  auto partial = [&](double n, double rA, double rB) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.pattern.size(); ++i) {
      double pre = f.pattern_prefix[i];
      double len = f.pattern[i].second - f.pattern[i].first;
      double rlo = std::max(rA, pre), rhi = std::min(rB, pre + len);
      if (rlo < rhi) {
        double base = n * q + f.phase + f.pattern[i].first - pre;  // T = base + r
        acc += std::log((base + rhi) / (base + rlo));
      }
    }
    return acc;
  };
  if (n1 == n2) return partial(n1, w1 - n1 * p, w2 - n2 * p);
  double total = partial(n1, w1 - n1 * p, p);
  if (n2 > n1 + 1.0) {
    for (const auto& piece : f.pattern) {
      double a = f.phase + piece.first;
      double b = f.phase + piece.second;
      total += log_ratio_sum(q, a, b, n1 + 1.0, n2);
    }
  }
  total += partial(n2, 0.0, w2 - n2 * p);
  return total;
}

}  // namespace

double periodic_sup_sigma(const PeriodicForm& f, double D) {
  PeriodicForm pure = f;
  pure.phase = 0.0;
  double best = 0.0;
  auto coverage = [&](double x) { return periodic_F(pure, x + D) - periodic_F(pure, x); };
  for (const auto& p : f.pattern) {
    for (double edge : {p.first, p.second}) {
      double x1 = edge;
      double x2 = edge - D - std::floor((edge - D) / f.period) * f.period;
      best = std::max(best, std::max(coverage(x1), coverage(x2)));
    }
  }
  return best / D;
}

double periodic_inf_sigma(const PeriodicForm& f, double D) {
  PeriodicForm pure = f;
  pure.phase = 0.0;
  double best = D;
  auto coverage = [&](double x) { return periodic_F(pure, x + D) - periodic_F(pure, x); };
  for (const auto& p : f.pattern) {
    for (double edge : {p.first, p.second}) {
      double x1 = edge;
      double x2 = edge - D - std::floor((edge - D) / f.period) * f.period;
      best = std::min(best, std::min(coverage(x1), coverage(x2)));
    }
  }
  return best / D;
}

// ---------------------------------------------------------------------------
// per-node evaluators
// ---------------------------------------------------------------------------

namespace {

struct Eval {
  explicit Eval(std::size_t b) : budget(b) {}
  virtual ~Eval() = default;
  virtual double S(double x) const = 0;
  virtual double Slog(double t) const = 0;
  virtual double xmax() const = 0;
  virtual double tmax() const = 0;
  virtual double enum_xmax() const = 0;  // pieces() reachable up to here
  virtual void pieces(double lo, double hi, std::vector<Interval<double>>& out) const = 0;
  virtual const std::optional<PeriodicForm>& pform() const {
    static const std::optional<PeriodicForm> none;
    return none;
  }
  void guard_pieces(std::size_t n, const char* what) const {
    if (n > budget) {
      std::ostringstream os;
      os << what << ": piece enumeration exceeds the budget of " << budget;
      throw HorizonError(os.str());
    }
  }
  std::size_t budget;
};

using EvalPtr = std::unique_ptr<Eval>;

EvalPtr build_eval(const SpecNode& n, std::size_t budget);

struct FiniteEval final : Eval {
  std::vector<std::pair<double, double>> ps;
  std::vector<double> pre;
  FiniteEval(const FiniteData& d, std::size_t b) : Eval(b) {
    double acc = 0.0;
    for (const auto& p : d.pieces) {
      ps.emplace_back(p.first.approx, p.second.approx);
      pre.push_back(acc);
      acc += p.second.approx - p.first.approx;
    }
    pre.push_back(acc);
  }
  double S(double x) const override {
    double s = 0.0;
    for (const auto& p : ps) {
      if (x <= p.first) break;
      s += std::min(x, p.second) - p.first;
    }
    return s;
  }
  double Slog(double t) const override {
    double X = std::exp(std::min(t, kTCap));
    double s = 0.0;
    for (const auto& p : ps) {
      double lo = std::max(p.first, 1.0), hi = std::min(p.second, X);
      if (lo < hi) s += std::log(hi / lo);
    }
    return s;
  }
  double xmax() const override { return kXCap; }
  double tmax() const override { return kTCap; }
  double enum_xmax() const override { return kXCap; }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    for (const auto& p : ps) {
      double a = std::max(p.first, lo), b = std::min(p.second, hi);
      if (a < b) out.emplace_back(a, b);
    }
  }
};

struct PeriodicEval final : Eval {
  std::optional<PeriodicForm> form;
  double start_prefix;  // unstarted prefix at the start point
  PeriodicEval(const PeriodicData& d, std::size_t b) : Eval(b) {
    PeriodicForm f;
    f.period = d.period.approx;
    f.start = d.start.approx;
    f.phase = d.phase.approx;
    double acc = 0.0;
    for (const auto& p : d.pattern) {
      f.pattern.emplace_back(p.first.approx, p.second.approx);
      f.pattern_prefix.push_back(acc);
      acc += p.second.approx - p.first.approx;
    }
    f.pattern_measure = acc;
    form = std::move(f);
    start_prefix = periodic_F(*form, std::max(form->start, 0.0));
  }
  const PeriodicForm& f() const { return *form; }
  double S(double x) const override {
    if (x <= f().start) return 0.0;
    return periodic_F(f(), x) - start_prefix;
  }
  double Slog(double t) const override {
    if (t <= 0.0) return 0.0;
    double X = std::exp(std::min(t, kTCap));
    return periodic_weighted_integral(f(), 1.0, X, 0.0);
  }
  double xmax() const override { return kXCap; }
  double tmax() const override { return kTCap; }
  double enum_xmax() const override {
    return std::min(kXCap, static_cast<double>(budget) * f().period /
                               std::max<double>(1.0, f().pattern.size()));
  }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    lo = std::max(lo, f().start);
    if (!(lo < hi)) return;
    double q = f().period;
    double est = (hi - lo) / q * static_cast<double>(f().pattern.size()) + 2.0;
    guard_pieces(static_cast<std::size_t>(std::min(est, 1e18)), "periodic");
    double k = std::floor((lo - f().phase - q) / q);
    for (;; k += 1.0) {
      double base = f().phase + k * q;
      if (!(base < hi)) break;
      for (const auto& p : f().pattern) {
        double a = std::max(base + p.first, lo);
        double b = std::min(base + p.second, hi);
        if (a < b) out.emplace_back(a, b);
      }
    }
  }
  const std::optional<PeriodicForm>& pform() const override { return form; }
};

struct SquaresEval final : Eval {
  explicit SquaresEval(std::size_t b) : Eval(b) {}
  static double block_index(double x) {  // largest I with I^2 <= x
    double i = std::floor(std::sqrt(std::max(x, 0.0)));
    while ((i + 1.0) * (i + 1.0) <= x) i += 1.0;
    while (i > 0.0 && i * i > x) i -= 1.0;
    return i;
  }
  double S(double x) const override {
    if (x <= 0.0) return 0.0;
    double i = block_index(x);
    double partial_lo = (i + 1.0) * (i + 1.0) - 1.0;
    double partial = std::min(std::max(x - partial_lo, 0.0), 1.0);
    return i + partial;
  }
  double Slog(double t) const override {
    if (t <= 0.0) return 0.0;
    double X = std::exp(std::min(t, kTCap));
    double i = block_index(X);
    double total = i >= 2.0 ? std::log(2.0 * i / (i + 1.0)) : 0.0;
    double j = i + 1.0;
    double plo = j * j - 1.0;
    if (j >= 2.0 && X > plo) total += std::log(X / plo);
    return total;
  }
  double xmax() const override { return kXCap; }
  double tmax() const override { return kTCap; }
  double enum_xmax() const override {
    double bd = static_cast<double>(budget);
    return std::min(kXCap, bd * bd);
  }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    if (!(lo < hi)) return;
    double i = std::max(1.0, block_index(std::max(lo, 0.0)));
    guard_pieces(static_cast<std::size_t>(
                     std::min(1e18, std::sqrt(hi) - std::sqrt(std::max(lo, 0.0)) + 2.0)),
                 "squares");
    for (;; i += 1.0) {
      double plo = i * i - 1.0;
      if (!(plo < hi)) break;
      double a = std::max(plo, lo), b = std::min(i * i, hi);
      if (a < b) out.emplace_back(a, b);
    }
  }
};

struct GeomEval final : Eval {
  double llo, lhi, lr;
  GeomEval(const GeomData& d, std::size_t b)
      : Eval(b), llo(d.lo.log_value), lhi(d.hi.log_value), lr(d.ratio.log_value) {}
  double S(double x) const override {
    if (x <= 0.0) return 0.0;
    double lx = std::log(x);
    if (lx <= llo) return 0.0;
    double nfull = std::max(0.0, std::floor((lx - lhi) / lr) + 1.0);
    double len0 = std::exp(lhi) - std::exp(llo);
    double s = 0.0;
    if (nfull > 0.0) s = len0 * std::expm1(nfull * lr) / std::expm1(lr);
    double plo = std::exp(llo + nfull * lr);
    if (x > plo) s += std::min(x, std::exp(lhi + nfull * lr)) - plo;
    return s;
  }
  double Slog(double t) const override {
    if (t <= 0.0) return 0.0;
    double n = std::max(0.0, std::ceil(-lhi / lr));
    double total = 0.0;
    for (;; n += 1.0) {
      double a = llo + n * lr;
      if (!(a < t)) break;
      double b = std::min(lhi + n * lr, t);
      double a2 = std::max(a, 0.0);
      if (a2 < b) total += b - a2;
    }
    return total;
  }
  double xmax() const override { return kXCap; }
  double tmax() const override { return kTCap; }
  double enum_xmax() const override { return kXCap; }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    if (!(lo < hi) || hi <= 0.0) return;
    double n = 0.0;
    if (lo > 0.0) n = std::max(0.0, std::floor((std::log(lo) - lhi) / lr));
    for (;; n += 1.0) {
      double a = std::exp(llo + n * lr);
      if (!(a < hi)) break;
      double b = std::min(std::exp(lhi + n * lr), hi);
      double a2 = std::max(a, lo);
      if (a2 < b) out.emplace_back(a2, b);
      guard_pieces(out.size(), "geometric family");
    }
  }
};

struct TailEval final : Eval {
  double c;
  TailEval(const TailData& d, std::size_t b) : Eval(b), c(d.c.approx) {}
  double S(double x) const override { return std::max(x - c, 0.0); }
  double Slog(double t) const override {
    return std::max(t - std::max(std::log(std::max(c, 1e-308)), 0.0), 0.0);
  }
  double xmax() const override { return kXCap; }
  double tmax() const override { return kTCap; }
  double enum_xmax() const override { return kXCap; }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    double a = std::max(lo, c);
    if (a < hi) out.emplace_back(a, hi);
  }
};

struct GeneratorEval final : Eval {
  std::vector<std::pair<double, double>> ps;
  double extent = 0.0;
  GeneratorEval(const GeneratorData& d, std::size_t b) : Eval(b) {
    std::size_t cap = std::min<std::size_t>(b, 100000);
    Rat prev_lo(-1);
    for (std::uint64_t i = 0; i <= cap; ++i) {
      Interval<Rat> iv = d.family(i);
      if (iv.lo < prev_lo)
        throw InvariantError("generator: family endpoints must be nondecreasing in n");
      prev_lo = iv.lo;
      extent = to_double(iv.lo);
      if (!iv.empty()) ps.emplace_back(to_double(iv.lo), to_double(iv.hi));
      if (extent > 1e15) break;
    }
  }
  double S(double x) const override {
    double s = 0.0;
    for (const auto& p : ps) {
      if (x <= p.first) break;
      s += std::min(x, p.second) - p.first;
    }
    return s;
  }
  double Slog(double t) const override {
    double X = std::exp(std::min(t, kTCap));
    double s = 0.0;
    for (const auto& p : ps) {
      double lo = std::max(p.first, 1.0), hi = std::min(p.second, X);
      if (lo < hi) s += std::log(hi / lo);
    }
    return s;
  }
  double xmax() const override { return extent; }
  double tmax() const override { return std::log(std::max(extent, 1.0)); }
  double enum_xmax() const override { return extent; }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    for (const auto& p : ps) {
      double a = std::max(p.first, lo), b = std::min(p.second, hi);
      if (a < b) out.emplace_back(a, b);
    }
  }
};

struct ComplementEval final : Eval {
  EvalPtr child;
  ComplementEval(EvalPtr c, std::size_t b) : Eval(b), child(std::move(c)) {}
  double S(double x) const override { return x - child->S(x); }
  double Slog(double t) const override { return std::max(t, 0.0) - child->Slog(t); }
  double xmax() const override { return child->xmax(); }
  double tmax() const override { return child->tmax(); }
  double enum_xmax() const override { return child->enum_xmax(); }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    std::vector<Interval<double>> inner;
    child->pieces(lo, hi, inner);
    double prev = lo;
    for (const auto& p : inner) {
      if (prev < p.lo) out.emplace_back(prev, p.lo);
      prev = p.hi;
    }
    if (prev < hi) out.emplace_back(prev, hi);
  }
};

struct UnionEval final : Eval {
  EvalPtr left, right;
  UnionEval(EvalPtr l, EvalPtr r, std::size_t b) : Eval(b), left(std::move(l)), right(std::move(r)) {}
  double S(double x) const override { return left->S(x) + right->S(x); }
  double Slog(double t) const override { return left->Slog(t) + right->Slog(t); }
  double xmax() const override { return std::min(left->xmax(), right->xmax()); }
  double tmax() const override { return std::min(left->tmax(), right->tmax()); }
  double enum_xmax() const override { return std::min(left->enum_xmax(), right->enum_xmax()); }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    std::vector<Interval<double>> a, c;
    left->pieces(lo, hi, a);
    right->pieces(lo, hi, c);
    a.insert(a.end(), c.begin(), c.end());
    std::sort(a.begin(), a.end(),
              [](const Interval<double>& x, const Interval<double>& y) { return x.lo < y.lo; });
    for (const auto& p : a) {
      if (!out.empty() && p.lo < out.back().hi)
        throw StructuralError("disjoint union: operands overlap on the evaluated range");
      if (!out.empty() && p.lo == out.back().hi) {
        out.back().hi = p.hi;
      } else {
        out.push_back(p);
      }
    }
  }
};

struct TranslateEval final : Eval {
  EvalPtr child;
  double c;
  TranslateEval(EvalPtr ch, double off, std::size_t b) : Eval(b), child(std::move(ch)), c(off) {}
  double S(double x) const override { return child->S(std::max(x - c, 0.0)); }
  double Slog(double t) const override {
    if (t <= 0.0) return 0.0;
    double X = std::exp(std::min(t, kTCap));
    if (X <= c) return 0.0;
    std::vector<Interval<double>> inner;
    child->pieces(std::max(1.0 - c, 0.0), X - c, inner);
    double s = 0.0;
    for (const auto& p : inner) {
      double lo = std::max(p.lo + c, 1.0), hi = std::min(p.hi + c, X);
      if (lo < hi) s += std::log(hi / lo);
    }
    return s;
  }
  double xmax() const override { return std::min(child->xmax() + c, kXCap); }
  double tmax() const override {
    return std::min(kTCap, std::log(std::max(child->enum_xmax(), 1.0)));
  }
  double enum_xmax() const override { return std::min(child->enum_xmax() + c, kXCap); }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    if (hi <= c) return;
    std::vector<Interval<double>> inner;
    child->pieces(std::max(lo - c, 0.0), hi - c, inner);
    for (const auto& p : inner) out.emplace_back(p.lo + c, p.hi + c);
  }
};

struct ScaleEval final : Eval {
  EvalPtr child;
  double c, logc;
  double boundary = 0.0;  // ∫ du/u over A ∩ [1/c, 1) (c>1) or -∫ over A ∩ [1, 1/c)
  ScaleEval(EvalPtr ch, double factor, std::size_t b)
      : Eval(b), child(std::move(ch)), c(factor), logc(std::log(factor)) {
    std::vector<Interval<double>> inner;
    if (c > 1.0) {
      child->pieces(1.0 / c, 1.0, inner);
      for (const auto& p : inner) boundary += std::log(p.hi / p.lo);
    } else if (c < 1.0) {
      child->pieces(1.0, 1.0 / c, inner);
      for (const auto& p : inner) boundary -= std::log(p.hi / p.lo);
    }
  }
  double S(double x) const override { return c * child->S(x / c); }
  double Slog(double t) const override {
    if (t <= 0.0) return 0.0;
    double tp = t - logc;
    if (tp >= 0.0) return child->Slog(tp) + boundary;
    // whole range sits below the scaled start: integrate directly
    std::vector<Interval<double>> inner;
    child->pieces(1.0 / c, std::exp(tp), inner);
    double s = 0.0;
    for (const auto& p : inner) s += std::log(p.hi / p.lo);
    return s;
  }
  double xmax() const override { return std::min(child->xmax() * c, kXCap); }
  double tmax() const override { return std::min(child->tmax() + logc, kTCap); }
  double enum_xmax() const override { return std::min(child->enum_xmax() * c, kXCap); }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    std::vector<Interval<double>> inner;
    child->pieces(lo / c, hi / c, inner);
    for (const auto& p : inner) out.emplace_back(p.lo * c, p.hi * c);
  }
};

struct LogImageEval final : Eval {
  EvalPtr child;
  LogImageEval(EvalPtr ch, std::size_t b) : Eval(b), child(std::move(ch)) {}
  double S(double x) const override { return child->Slog(x); }
  double Slog(double t) const override {
    if (t <= 0.0) return 0.0;
    double X = std::min(std::exp(std::min(t, 7.0)), enum_xmax());
    std::vector<Interval<double>> inner;
    pieces(1.0, X, inner);
    double s = 0.0;
    for (const auto& p : inner) s += std::log(p.hi / p.lo);
    return s;
  }
  double xmax() const override { return child->tmax(); }
  double tmax() const override {
    return std::log(std::max(std::min(child->tmax(), std::log(child->enum_xmax())), 1.0));
  }
  double enum_xmax() const override { return std::min(child->tmax(), std::log(child->enum_xmax())); }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    if (!(lo < hi)) return;
    double xhi = std::exp(std::min(hi, kTCap));
    std::vector<Interval<double>> inner;
    child->pieces(std::exp(std::max(lo, 0.0)), xhi, inner);
    for (const auto& p : inner) {
      if (p.hi <= 1.0) continue;
      double a = std::max(std::log(std::max(p.lo, 1.0)), lo);
      double b = std::min(std::log(p.hi), hi);
      if (a < b) out.emplace_back(a, b);
    }
  }
};

struct ThinEval final : Eval {
  EvalPtr ea, eb;
  double voff = 0.0;  // unstarted-prefix offset when ea is periodic
  ThinEval(EvalPtr a, EvalPtr b, std::size_t bud) : Eval(bud), ea(std::move(a)), eb(std::move(b)) {
    if (ea->pform()) {
      const PeriodicForm& f = *ea->pform();
      voff = periodic_F(f, std::max(f.start, 0.0));
    }
  }
  double S(double x) const override { return eb->S(ea->S(x)); }
  double Slog(double t) const override {
    if (t <= 0.0) return 0.0;
    double X = std::exp(std::min(t, kTCap));
    double v1 = ea->S(1.0);
    double v2 = ea->S(std::min(X, ea->xmax()));
    if (ea->pform()) {
      const PeriodicForm& f = *ea->pform();
      std::vector<Interval<double>> bp;
      eb->pieces(v1, v2, bp);
      double s = 0.0;
      for (const auto& p : bp) s += periodic_inverse_integral(f, voff, p.lo, p.hi);
      return s;
    }
    // enumerate A and integrate 1/(delta + v) over B within each prefix range
    std::vector<Interval<double>> ap;
    ea->pieces(1.0, X, ap);
    double c = ea->S(1.0);
    double s = 0.0;
    const std::optional<PeriodicForm>& bf = eb->pform();
    for (const auto& p : ap) {
      double len = p.hi - p.lo;
      double delta = p.lo - c;
      if (bf) {
        s += periodic_weighted_integral(*bf, c, c + len, delta);
      } else {
        std::vector<Interval<double>> bp;
        eb->pieces(c, c + len, bp);
        for (const auto& bq : bp) s += std::log((bq.hi + delta) / (bq.lo + delta));
      }
      c += len;
    }
    return s;
  }
  double xmax() const override { return std::min(ea->xmax(), eb->xmax()); }
  double tmax() const override {
    double cap = kTCap;
    if (ea->pform()) {
      cap = std::min(cap, std::log(std::max(eb->enum_xmax(), 1.0)));
    } else {
      cap = std::min(cap, std::log(std::max(ea->enum_xmax(), 1.0)));
      if (!eb->pform()) cap = std::min(cap, std::log(std::max(eb->enum_xmax(), 1.0)));
    }
    return cap;
  }
  double enum_xmax() const override { return std::min(ea->enum_xmax(), eb->enum_xmax()); }
  void pieces(double lo, double hi, std::vector<Interval<double>>& out) const override {
    std::vector<Interval<double>> ap;
    ea->pieces(std::max(lo, 0.0), hi, ap);
    double c = ea->S(std::max(lo, 0.0));
    for (const auto& p : ap) {
      double len = p.hi - p.lo;
      std::vector<Interval<double>> bp;
      eb->pieces(c, c + len, bp);
      for (const auto& bq : bp) out.emplace_back(bq.lo - c + p.lo, bq.hi - c + p.lo);
      guard_pieces(out.size(), "thin");
      c += len;
    }
  }
};

EvalPtr build_eval(const SpecNode& n, std::size_t budget) {
  switch (n.kind) {
    case SpecKind::finite:
      return std::make_unique<FiniteEval>(std::get<FiniteData>(n.data), budget);
    case SpecKind::periodic:
      return std::make_unique<PeriodicEval>(std::get<PeriodicData>(n.data), budget);
    case SpecKind::squares:
      return std::make_unique<SquaresEval>(budget);
    case SpecKind::geom_blocks:
      return std::make_unique<GeomEval>(std::get<GeomData>(n.data), budget);
    case SpecKind::tail:
      return std::make_unique<TailEval>(std::get<TailData>(n.data), budget);
    case SpecKind::generator:
      return std::make_unique<GeneratorEval>(std::get<GeneratorData>(n.data), budget);
    case SpecKind::complement:
      return std::make_unique<ComplementEval>(
          build_eval(*std::get<UnaryData>(n.data).child, budget), budget);
    case SpecKind::disjoint_union: {
      const auto& bd = std::get<BinaryData>(n.data);
      return std::make_unique<UnionEval>(build_eval(*bd.left, budget),
                                         build_eval(*bd.right, budget), budget);
    }
    case SpecKind::translate: {
      const auto& u = std::get<UnaryData>(n.data);
      return std::make_unique<TranslateEval>(build_eval(*u.child, budget), u.c.approx, budget);
    }
    case SpecKind::scale: {
      const auto& u = std::get<UnaryData>(n.data);
      return std::make_unique<ScaleEval>(build_eval(*u.child, budget), u.c.approx, budget);
    }
    case SpecKind::log_image:
      return std::make_unique<LogImageEval>(
          build_eval(*std::get<UnaryData>(n.data).child, budget), budget);
    case SpecKind::thin: {
      const auto& bd = std::get<BinaryData>(n.data);
      return std::make_unique<ThinEval>(build_eval(*bd.left, budget),
                                        build_eval(*bd.right, budget), budget);
    }
  }
  throw StructuralError("profile: unknown node kind");
}

}  // namespace

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

struct Profile::Impl {
  EvalPtr root;
};

Profile::Profile(const SetSpec& spec, std::size_t budget)
    : impl_(std::make_unique<Impl>(Impl{build_eval(spec.node(), budget)})) {}

Profile::~Profile() = default;

double Profile::prefix(double x) const {
  if (x <= 0.0) return 0.0;
  if (x > impl_->root->xmax()) {
    std::ostringstream os;
    os << "prefix: x = " << x << " beyond the evaluable horizon " << impl_->root->xmax();
    throw HorizonError(os.str());
  }
  return impl_->root->S(x);
}

double Profile::log_prefix(double t) const {
  if (t <= 0.0) return 0.0;
  if (t > impl_->root->tmax()) {
    std::ostringstream os;
    os << "log_prefix: t = " << t << " beyond the evaluable horizon " << impl_->root->tmax();
    throw HorizonError(os.str());
  }
  return impl_->root->Slog(t);
}

double Profile::x_max() const { return impl_->root->xmax(); }
double Profile::t_max() const { return impl_->root->tmax(); }

const std::optional<PeriodicForm>& Profile::periodic_form() const { return impl_->root->pform(); }

Profile::Range Profile::pieces_in(double lo, double hi) const {
  Range r;
  lo = std::max(lo, 0.0);
  r.prefix_lo = lo > 0.0 ? impl_->root->S(lo) : 0.0;
  if (lo < hi) impl_->root->pieces(lo, hi, r.pieces);
  return r;
}

}  // namespace unidense

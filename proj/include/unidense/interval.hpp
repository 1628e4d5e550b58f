#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "unidense/errors.hpp"
#include "unidense/rational.hpp"

namespace unidense {

// Half-open segment [lo, hi) with nonnegative endpoints.
template <class T>
struct Interval {
  T lo{};
  T hi{};

  Interval() = default;
  Interval(T l, T h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo < T(0) || hi < lo) throw StructuralError("interval: need 0 <= lo <= hi");
  }

  T length() const { return hi - lo; }
  bool empty() const { return !(lo < hi); }
  bool contains(const T& x) const { return lo <= x && x < hi; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

// A finite, sorted, pairwise-disjoint interval sequence inside [0, W):
// a set of M materialized on a window. No empty pieces, no touching pieces.
template <class T>
class WindowSeq {
 public:
  WindowSeq() = default;
  explicit WindowSeq(T window) : window_(std::move(window)) {}

  // Normalizes: sorts, drops empties, merges touching pieces, clips to [0, W).
  // Overlapping input pieces are a structural error.
  static WindowSeq normalized(T window, std::vector<Interval<T>> raw) {
    WindowSeq out(std::move(window));
    std::erase_if(raw, [](const Interval<T>& v) { return v.empty(); });
    std::sort(raw.begin(), raw.end(),
              [](const Interval<T>& a, const Interval<T>& b) { return a.lo < b.lo; });
    for (auto& v : raw) {
      if (!(v.lo < out.window_)) break;
      if (out.window_ < v.hi) v.hi = out.window_;
      if (v.empty()) continue;
      if (!out.pieces_.empty()) {
        Interval<T>& last = out.pieces_.back();
        if (v.lo < last.hi) {
          throw StructuralError("overlapping intervals [" + scalar_str(last.lo) + ", " +
                                scalar_str(last.hi) + ") and [" + scalar_str(v.lo) + ", " +
                                scalar_str(v.hi) + ")");
        }
        if (v.lo == last.hi) {
          last.hi = v.hi;
          continue;
        }
      }
      out.pieces_.push_back(v);
    }
    return out;
  }

  // Union of possibly-overlapping pieces (pieces get merged, never rejected).
  static WindowSeq merged(T window, std::vector<Interval<T>> raw) {
    WindowSeq out(std::move(window));
    std::erase_if(raw, [](const Interval<T>& v) { return v.empty(); });
    std::sort(raw.begin(), raw.end(),
              [](const Interval<T>& a, const Interval<T>& b) { return a.lo < b.lo; });
    for (auto& v : raw) {
      if (!(v.lo < out.window_)) break;
      if (out.window_ < v.hi) v.hi = out.window_;
      if (v.empty()) continue;
      if (!out.pieces_.empty() && !(out.pieces_.back().hi < v.lo)) {
        out.pieces_.back().hi = std::max(out.pieces_.back().hi, v.hi);
      } else {
        out.pieces_.push_back(v);
      }
    }
    return out;
  }

  const T& window() const { return window_; }
  const std::vector<Interval<T>>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  std::size_t size() const { return pieces_.size(); }

  T measure() const {
    T m(0);
    for (const auto& v : pieces_) m += v.length();
    return m;
  }

  bool contains(const T& x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const T& v, const Interval<T>& p) { return v < p.lo; });
    if (it == pieces_.begin()) return false;
    --it;
    return it->contains(x);
  }

  // m(S ∩ [0, x)), the prefix function restricted to this window.
  T prefix_at(const T& x) const {
    T m(0);
    for (const auto& v : pieces_) {
      if (!(v.lo < x)) break;
      m += std::min(v.hi, x) - v.lo;
    }
    return m;
  }

  WindowSeq complement_within() const {
    WindowSeq out(window_);
    T prev(0);
    for (const auto& v : pieces_) {
      if (prev < v.lo) out.pieces_.push_back(Interval<T>(prev, v.lo));
      prev = v.hi;
    }
    if (prev < window_) out.pieces_.push_back(Interval<T>(prev, window_));
    return out;
  }

  friend WindowSeq intersect(const WindowSeq& a, const WindowSeq& b) {
    WindowSeq out(std::min(a.window_, b.window_));
    std::size_t i = 0, j = 0;
    while (i < a.pieces_.size() && j < b.pieces_.size()) {
      const auto& x = a.pieces_[i];
      const auto& y = b.pieces_[j];
      T lo = std::max(x.lo, y.lo);
      T hi = std::min(x.hi, y.hi);
      if (lo < hi && lo < out.window_) {
        out.pieces_.push_back(Interval<T>(lo, std::min(hi, out.window_)));
      }
      if (x.hi < y.hi) {
        ++i;
      } else {
        ++j;
      }
    }
    return out;
  }

  // Set union as sets (merging allowed).
  friend WindowSeq set_union(const WindowSeq& a, const WindowSeq& b) {
    std::vector<Interval<T>> raw = a.pieces_;
    raw.insert(raw.end(), b.pieces_.begin(), b.pieces_.end());
    return merged(std::min(a.window_, b.window_), std::move(raw));
  }

  WindowSeq translated(const T& c, const T& new_window) const {
    WindowSeq out(new_window);
    for (const auto& v : pieces_) {
      T lo = v.lo + c;
      if (!(lo < new_window)) break;
      out.pieces_.push_back(Interval<T>(lo, std::min(v.hi + c, new_window)));
    }
    return out;
  }

  WindowSeq scaled(const T& c, const T& new_window) const {
    WindowSeq out(new_window);
    for (const auto& v : pieces_) {
      T lo = v.lo * c;
      if (!(lo < new_window)) break;
      out.pieces_.push_back(Interval<T>(lo, std::min(v.hi * c, new_window)));
    }
    return out;
  }

  // Equality of the point sets (windows may differ; compares pieces only).
  friend bool operator==(const WindowSeq& a, const WindowSeq& b) {
    return a.pieces_ == b.pieces_;
  }

  std::string str() const {
    std::ostringstream os;
    if (pieces_.empty()) return "{}";
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (i) os << " ";
      os << "[" << scalar_str(pieces_[i].lo) << ", " << scalar_str(pieces_[i].hi) << ")";
    }
    return os.str();
  }

 private:
  static std::string scalar_str(const Rat& v) { return rat_to_string(v); }
  static std::string scalar_str(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }

  T window_{};
  std::vector<Interval<T>> pieces_;
};

using RatSeq = WindowSeq<Rat>;
using RealSeq = WindowSeq<double>;

}  // namespace unidense

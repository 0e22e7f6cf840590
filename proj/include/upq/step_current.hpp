#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "upq/iwasawa.hpp"

namespace upq {

/// Which group a step current takes values in.
enum class CurrentVariant { triangular, iwasawa, group, compact };

inline std::string to_string(CurrentVariant v) {
  switch (v) {
  case CurrentVariant::triangular: return "triangular";
  case CurrentVariant::iwasawa: return "iwasawa";
  case CurrentVariant::group: return "group";
  case CurrentVariant::compact: return "compact";
  }
  return "unknown";
}

/// Group operations used by the piecewise algebra.
template <typename T>
struct CurrentTraits;

template <>
struct CurrentTraits<TriangularS> {
  static TriangularS mul(const TriangularS& a, const TriangularS& b) { return a * b; }
  static TriangularS inv(const TriangularS& a) { return a.inverse(); }
  static TriangularS identity(const Signature& sig) { return TriangularS::identity(sig); }
  static const Signature& sig(const TriangularS& a) { return a.sig(); }
};

template <>
struct CurrentTraits<IwasawaElement> {
  static IwasawaElement mul(const IwasawaElement& a, const IwasawaElement& b) { return p_mul(a, b); }
  static IwasawaElement inv(const IwasawaElement& a) { return p_inv(a); }
  static IwasawaElement identity(const Signature& sig) { return IwasawaElement::identity(sig); }
  static const Signature& sig(const IwasawaElement& a) { return a.sig(); }
};

template <>
struct CurrentTraits<GroupElement> {
  static GroupElement mul(const GroupElement& a, const GroupElement& b) { return a * b; }
  static GroupElement inv(const GroupElement& a) { return a.inverse(); }
  static GroupElement identity(const Signature& sig) { return GroupElement::identity(sig); }
  static const Signature& sig(const GroupElement& a) { return a.sig(); }
};

/// Step function [0,1) → G: value i on [breaks[i], breaks[i+1]).
template <typename T>
class StepCurrent {
public:
  StepCurrent(CurrentVariant variant, std::vector<double> breaks, std::vector<T> values)
      : variant_(variant), breaks_(std::move(breaks)), values_(std::move(values)) {
    if (values_.empty() || breaks_.size() != values_.size() + 1)
      throw InvalidInput("step current needs one value per piece and pieces+1 breakpoints");
    if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
      throw InvalidInput("step current breakpoints must start at 0 and end at 1");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (!(breaks_[i] > breaks_[i - 1])) throw InvalidInput("step current breakpoints must increase");
    for (const auto& v : values_)
      if (!(CurrentTraits<T>::sig(v) == CurrentTraits<T>::sig(values_.front())))
        throw SignatureMismatch("step current values have mixed signatures");
  }

  static StepCurrent constant(CurrentVariant variant, const T& value) {
    return StepCurrent(variant, {0.0, 1.0}, {value});
  }

  static StepCurrent identity(CurrentVariant variant, const Signature& sig) {
    return constant(variant, CurrentTraits<T>::identity(sig));
  }

  CurrentVariant variant() const { return variant_; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<T>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }
  const Signature& sig() const { return CurrentTraits<T>::sig(values_.front()); }

  /// Value at x ∈ [0,1).
  const T& at(double x) const {
    if (!(x >= 0.0 && x < 1.0)) throw InvalidInput("current evaluated outside [0,1)");
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin() - 1)];
  }

private:
  CurrentVariant variant_;
  std::vector<double> breaks_;
  std::vector<T> values_;
};

/// Sorted union of two breakpoint lists.
inline std::vector<double> common_refinement(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Pointwise op(a(x), b(x)) on the common refinement.
template <typename T, typename U, typename R, typename Op>
StepCurrent<R> combine_pointwise(CurrentVariant out_variant, const StepCurrent<T>& a, const StepCurrent<U>& b,
                                 Op op) {
  const auto breaks = common_refinement(a.breaks(), b.breaks());
  std::vector<R> vals;
  vals.reserve(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    vals.push_back(op(a.at(mid), b.at(mid)));
  }
  return StepCurrent<R>(out_variant, breaks, std::move(vals));
}

/// Pointwise op(a(x)) keeping a's partition.
template <typename T, typename R, typename Op>
StepCurrent<R> map_pointwise(CurrentVariant out_variant, const StepCurrent<T>& a, Op op) {
  std::vector<R> vals;
  vals.reserve(a.pieces());
  for (const auto& v : a.values()) vals.push_back(op(v));
  return StepCurrent<R>(out_variant, a.breaks(), std::move(vals));
}

template <typename T>
StepCurrent<T> current_mul(const StepCurrent<T>& a, const StepCurrent<T>& b) {
  if (a.variant() != b.variant())
    throw VariantMismatch(to_string(a.variant()) + " vs " + to_string(b.variant()));
  return combine_pointwise<T, T, T>(a.variant(), a, b, [](const T& x, const T& y) { return CurrentTraits<T>::mul(x, y); });
}

template <typename T>
StepCurrent<T> current_inv(const StepCurrent<T>& a) {
  return map_pointwise<T, T>(a.variant(), a, [](const T& x) { return CurrentTraits<T>::inv(x); });
}

/// Merges adjacent pieces whose values satisfy `same`.
template <typename T, typename Eq>
StepCurrent<T> simplify(const StepCurrent<T>& a, Eq same) {
  std::vector<double> breaks{0.0};
  std::vector<T> vals{a.values().front()};
  for (std::size_t i = 1; i < a.pieces(); ++i) {
    if (same(vals.back(), a.values()[i])) continue;
    breaks.push_back(a.breaks()[i]);
    vals.push_back(a.values()[i]);
  }
  breaks.push_back(1.0);
  return StepCurrent<T>(a.variant(), std::move(breaks), std::move(vals));
}

} // namespace upq

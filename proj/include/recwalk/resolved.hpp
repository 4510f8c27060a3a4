#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

namespace recwalk {

// Finite-window verdict for quantities defined on the whole line: either a
// value that is certain from in-window data, or Censored, meaning some legal
// out-of-window continuation could still change it. Resolved values never
// change when a window is extended.
struct CensoredTag {};
inline constexpr CensoredTag censored{};

template <class T>
class Resolved {
 public:
  Resolved(CensoredTag) {}
  Resolved(T value) : v_(std::move(value)) {}

  bool resolved() const { return v_.has_value(); }
  bool is_censored() const { return !v_.has_value(); }
  explicit operator bool() const { return v_.has_value(); }

  const T& value() const {
    if (!v_) throw std::logic_error("Resolved: value() on a censored result");
    return *v_;
  }
  T value_or(T alt) const { return v_ ? *v_ : alt; }

 private:
  std::optional<T> v_;
};

template <class T>
bool operator==(const Resolved<T>& a, const Resolved<T>& b) {
  if (a.resolved() != b.resolved()) return false;
  return !a.resolved() || a.value() == b.value();
}

template <class T>
bool operator==(const Resolved<T>& a, const T& b) {
  return a.resolved() && a.value() == b;
}

}  // namespace recwalk

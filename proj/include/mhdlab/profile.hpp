#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mhdlab {

/// One analytic building block of an initial profile.
struct ProfileTerm {
  enum class Kind { Zero, Constant, Poly, Bump, Ramp };
  Kind kind = Kind::Zero;
  double a = 0.0, b = 0.0, c = 0.0;  // parameters in descriptor order

  double operator()(double r) const;
};

/// Sum of terms, parsed from descriptors such as
///   "zero" | "constant c" | "poly c0 c1 c2" | "bump r_lo r_hi amplitude" |
///   "ramp r_lo r_hi level", optionally joined with '+'.
/// `bump` is the C1 piecewise cubic vanishing with its derivative at both ends
/// and peaking at the midpoint; `ramp` rises C1-smoothly from 0 at r_lo to
/// `level` at r_hi and stays there.
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<ProfileTerm> terms, std::string text = {});

  static Profile parse(std::string_view descriptor);
  static Profile zero() { return {}; }

  double operator()(double r) const;
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::string& text() const noexcept { return text_; }
  const std::vector<ProfileTerm>& terms() const noexcept { return terms_; }

 private:
  std::vector<ProfileTerm> terms_;
  std::string text_ = "zero";
};

}  // namespace mhdlab

#include "mhdlab/profile.hpp"

#include <cmath>
#include <sstream>

#include "mhdlab/errors.hpp"

namespace mhdlab {
namespace {

double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

ProfileTerm parse_term(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  std::vector<double> args;
  for (std::string tok; in >> tok;) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("profile '" + text + "': bad number '" + tok + "'");
    }
  }
  auto expect = [&](std::size_t n) {
    if (args.size() != n)
      throw ConfigError("profile '" + text + "': expected " + std::to_string(n) + " numbers");
  };
  ProfileTerm t;
  if (kind == "zero") {
    expect(0);
  } else if (kind == "constant") {
    expect(1);
    t = {ProfileTerm::Kind::Constant, args[0]};
  } else if (kind == "poly") {
    expect(3);
    t = {ProfileTerm::Kind::Poly, args[0], args[1], args[2]};
  } else if (kind == "bump" || kind == "ramp") {
    expect(3);
    if (!(args[1] > args[0]))
      throw ConfigError("profile '" + text + "': need r_lo < r_hi");
    t = {kind == "bump" ? ProfileTerm::Kind::Bump : ProfileTerm::Kind::Ramp, args[0], args[1],
         args[2]};
  } else {
    throw ConfigError("unknown profile kind '" + kind + "'");
  }
  return t;
}

}  // namespace

double ProfileTerm::operator()(double r) const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return a;
    case Kind::Poly: return a + r * (b + r * c);
    case Kind::Bump: {
      if (r <= a || r >= b) return 0.0;
      const double mid = 0.5 * (a + b);
      const double s = r <= mid ? (r - a) / (mid - a) : (b - r) / (b - mid);
      return c * smoothstep(s);
    }
    case Kind::Ramp: {
      if (r <= a) return 0.0;
      if (r >= b) return c;
      return c * smoothstep((r - a) / (b - a));
    }
  }
  return 0.0;
}

Profile::Profile(std::vector<ProfileTerm> terms, std::string text)
    : terms_(std::move(terms)), text_(std::move(text)) {
  std::erase_if(terms_, [](const ProfileTerm& t) { return t.kind == ProfileTerm::Kind::Zero; });
  if (text_.empty()) text_ = terms_.empty() ? "zero" : "custom";
}

Profile Profile::parse(std::string_view descriptor) {
  // Terms are separated by a standalone '+' token so that "1e+3" stays a number.
  std::vector<ProfileTerm> terms;
  std::istringstream in{std::string(descriptor)};
  std::string piece;
  auto flush = [&] {
    const std::string t = trim(piece);
    if (t.empty()) throw ConfigError("empty profile term in '" + std::string(descriptor) + "'");
    terms.push_back(parse_term(t));
    piece.clear();
  };
  for (std::string tok; in >> tok;) {
    if (tok == "+") {
      flush();
    } else {
      piece += ' ';
      piece += tok;
    }
  }
  flush();
  return Profile(std::move(terms), trim(descriptor));
}

double Profile::operator()(double r) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t(r);
  return sum;
}

}  // namespace mhdlab

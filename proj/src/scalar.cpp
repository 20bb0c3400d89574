#include "vshs/scalar.hpp"

#include <algorithm>
#include <cctype>

#include "vshs/error.hpp"

namespace vshs {

namespace {

mpq_class parse_rational(std::string text) {
  if (!text.empty() && text.front() == '+') text.erase(text.begin());
  if (text.empty() || text == "-") {
    throw Error(ErrorCode::ParseError, "empty rational");
  }
  const auto bad = std::find_if(text.begin(), text.end(), [](char c) {
    return !(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-');
  });
  if (bad != text.end() || std::count(text.begin(), text.end(), '/') > 1 ||
      text.find('-', 1) != std::string::npos || text.back() == '/') {
    throw Error(ErrorCode::ParseError, "malformed rational '" + text + "'");
  }
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw Error(ErrorCode::ParseError, "malformed rational '" + text + "'");
  }
  if (sgn(q.get_den()) == 0) {
    throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 ||
      mpz_perfect_square_p(q.get_den_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpz_class num;
  mpz_class den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  mpq_class root(num, den);
  root.canonicalize();
  return root;
}

std::string decimal_of(const mpq_class& q, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class num = abs(q.get_num()) * scale * 2 + q.get_den();
  mpz_class scaled = num / (2 * q.get_den());
  mpz_class whole = scaled / scale;
  mpz_class frac = scaled % scale;
  std::string out = sgn(q) < 0 && sgn(scaled) != 0 ? "-" : "";
  out += whole.get_str();
  if (digits > 0) {
    std::string f = frac.get_str();
    out += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  }
  return out;
}

}  // namespace

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::ZeroScalar, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty scalar");
  if (s.back() != 'i') return Scalar(parse_rational(s));

  s.pop_back();
  if (!s.empty() && s.back() == '*') s.pop_back();
  // Split at the last sign that is not the leading character.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if (s[k] == '+' || s[k] == '-') {
      split = k;
      break;
    }
  }
  std::string real_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string imag_part = split == std::string::npos ? s : s.substr(split);
  mpq_class im;
  if (imag_part.empty() || imag_part == "+") {
    im = 1;
  } else if (imag_part == "-") {
    im = -1;
  } else {
    im = parse_rational(imag_part);
  }
  mpq_class re = real_part.empty() ? mpq_class(0) : parse_rational(real_part);
  return Scalar(re, im);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::ZeroScalar, "division by zero");
  mpq_class norm = re_ * re_ + im_ * im_;
  return Scalar(re_ / norm, -im_ / norm);
}

std::string Scalar::str() const {
  if (is_real()) return re_.get_str();
  std::string imag = im_.get_str() + "*i";
  if (sgn(re_) == 0) return imag;
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + imag;
}

std::string Scalar::decimal(int digits) const {
  if (is_real()) return decimal_of(re_, digits);
  std::string imag = decimal_of(im_, digits);
  return decimal_of(re_, digits) + (sgn(im_) >= 0 ? "+" : "") + imag + "*i";
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error(ErrorCode::ZeroScalar, "division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

Scalar i_pow(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return Scalar(1);
    case 1:
      return Scalar(0, 1);
    case 2:
      return Scalar(-1);
    default:
      return Scalar(0, -1);
  }
}

Scalar pow(const Scalar& base, unsigned exponent) {
  Scalar result(1);
  Scalar b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

std::optional<Scalar> exact_sqrt(const Scalar& value) {
  const mpq_class& a = value.re();
  const mpq_class& b = value.im();
  if (sgn(b) == 0) {
    if (sgn(a) >= 0) {
      auto r = rational_sqrt(a);
      if (!r) return std::nullopt;
      return Scalar(*r);
    }
    auto r = rational_sqrt(-a);
    if (!r) return std::nullopt;
    return Scalar(0, *r);
  }
  auto modulus = rational_sqrt(a * a + b * b);
  if (!modulus) return std::nullopt;
  auto x = rational_sqrt((a + *modulus) / 2);
  if (!x || sgn(*x) == 0) return std::nullopt;
  mpq_class y = b / (2 * *x);
  return Scalar(*x, y);
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorCode::NonzeroInnerConstant: return "NonzeroInnerConstant";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::BadConstantTerm: return "BadConstantTerm";
    case ErrorCode::NonzeroConstant: return "NonzeroConstant";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotNilpotent: return "NotNilpotent";
    case ErrorCode::NotSplit: return "NotSplit";
    case ErrorCode::NotFree: return "NotFree";
    case ErrorCode::InconsistentLift: return "InconsistentLift";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::NotNilpotentResidue: return "NotNilpotentResidue";
    case ErrorCode::NotHodgeTate: return "NotHodgeTate";
    case ErrorCode::DegreeViolation: return "DegreeViolation";
    case ErrorCode::NotProportional: return "NotProportional";
    case ErrorCode::ZeroKS: return "ZeroKS";
    case ErrorCode::ResidueNotCompatible: return "ResidueNotCompatible";
    case ErrorCode::PairingNotDetermined: return "PairingNotDetermined";
    case ErrorCode::NotASquare: return "NotASquare";
    case ErrorCode::ZeroScalar: return "ZeroScalar";
    case ErrorCode::NoVolumeForm: return "NoVolumeForm";
    case ErrorCode::InvalidDnObject: return "InvalidDnObject";
    case ErrorCode::HardLefschetzFailure: return "HardLefschetzFailure";
    case ErrorCode::UnitNotPreserved: return "UnitNotPreserved";
    case ErrorCode::DegenerateIntersection: return "DegenerateIntersection";
    case ErrorCode::ZeroVolume: return "ZeroVolume";
    case ErrorCode::NotMaximallyUnipotent: return "NotMaximallyUnipotent";
    case ErrorCode::MirrorMapMismatch: return "MirrorMapMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace vshs

#include "geo/domain.hpp"

#include "geo/error.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace geo {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::domain: return "domain";
    case ErrorKind::convexity: return "convexity";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::integrability: return "integrability";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int dim) {
  if (dim < 1) {
    throw GeoError(ErrorKind::invalid_argument,
                   "domain dimension must be >= 1, got " + std::to_string(dim));
  }
}

}  // namespace

Domain::Domain(Kind kind, int dim, Vec lo, Vec hi)
    : kind_(kind), dim_(dim), lo_(std::move(lo)), hi_(std::move(hi)) {}

Domain Domain::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size()) {
    throw GeoError(ErrorKind::invalid_argument, "box bounds differ in size");
  }
  require_dim(static_cast<int>(lo.size()));
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || !(lo[i] < hi[i])) {
      std::ostringstream os;
      os << "box requires lo < hi componentwise; coordinate " << i << " has ["
         << lo[i] << ", " << hi[i] << "]";
      throw GeoError(ErrorKind::invalid_argument, os.str());
    }
  }
  const int dim = static_cast<int>(lo.size());
  return Domain(Kind::box, dim, std::move(lo), std::move(hi));
}

Domain Domain::box(int dim, double lo, double hi) {
  require_dim(dim);
  return box(Vec::Constant(dim, lo), Vec::Constant(dim, hi));
}

Domain Domain::positive_orthant(int dim) {
  require_dim(dim);
  return Domain(Kind::positive_orthant, dim, Vec::Zero(dim), Vec::Constant(dim, kInf));
}

Domain Domain::punctured_space(int dim) {
  require_dim(dim);
  return Domain(Kind::punctured_space, dim, Vec::Constant(dim, -kInf),
                Vec::Constant(dim, kInf));
}

Domain Domain::full_space(int dim) {
  require_dim(dim);
  return Domain(Kind::full_space, dim, Vec::Constant(dim, -kInf), Vec::Constant(dim, kInf));
}

bool Domain::contains(const Vec& x) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  switch (kind_) {
    case Kind::full_space:
      return true;
    case Kind::punctured_space:
      return x.squaredNorm() > 0.0;
    case Kind::positive_orthant:
    case Kind::box:
      return ((x.array() > lo_.array()) && (x.array() < hi_.array())).all();
  }
  return false;
}

Membership Domain::membership() const {
  return [self = *this](const Vec& x) { return self.contains(x); };
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::full_space: os << "R^" << dim_; break;
    case Kind::punctured_space: os << "R^" << dim_ << " \\ {0}"; break;
    case Kind::positive_orthant: os << "(0, inf)^" << dim_; break;
    case Kind::box:
      os << "box";
      for (int i = 0; i < dim_; ++i) os << (i ? " x " : " ") << "(" << lo_[i] << ", " << hi_[i] << ")";
      break;
  }
  return os.str();
}

SampleBox SampleBox::cube(int dim, double lo, double hi) {
  return SampleBox{Vec::Constant(dim, lo), Vec::Constant(dim, hi)};
}

std::vector<Vec> sample_points(const SampleBox& box, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int s = 0; s < count; ++s) {
    Vec x(box.lo.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace geo

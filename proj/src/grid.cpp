#include "rdlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace rdlab {

DomainSpec DomainSpec::interval(double length, int n) {
  if (!(length > 0.0)) throw Error("domain: interval length must be positive");
  if (n < 8) throw Error("domain: at least 8 interior nodes per axis required");
  DomainSpec d;
  d.dim = 1;
  d.extent = {length, 1.0};
  d.nodes = {n, 1};
  return d;
}

DomainSpec DomainSpec::rectangle(double lx, double ly, int nx, int ny) {
  if (!(lx > 0.0) || !(ly > 0.0))
    throw Error("domain: rectangle side lengths must be positive");
  if (nx < 8 || ny < 8)
    throw Error("domain: at least 8 interior nodes per axis required");
  DomainSpec d;
  d.dim = 2;
  d.extent = {lx, ly};
  d.nodes = {nx, ny};
  return d;
}

std::array<double, 2> DomainSpec::coords(int i) const {
  if (dim == 1) return {(i + 1) * spacing(0), 0.0};
  const int ix = i % nodes[0];
  const int iy = i / nodes[0];
  return {(ix + 1) * spacing(0), (iy + 1) * spacing(1)};
}

GridFunction::GridFunction(const DomainSpec& d, Eigen::VectorXd v)
    : domain(d), values(std::move(v)) {
  if (values.size() != domain.node_count())
    throw MismatchError("grid function: value count does not match domain");
  if (!values.allFinite())
    throw Error("grid function: non-finite sample value");
}

GridFunction GridFunction::constant(const DomainSpec& d, double value) {
  return GridFunction(d, Eigen::VectorXd::Constant(d.node_count(), value));
}

GridFunction GridFunction::sample(
    const DomainSpec& d, const std::function<double(double, double)>& f) {
  Eigen::VectorXd v(d.node_count());
  for (int i = 0; i < d.node_count(); ++i) {
    const auto xy = d.coords(i);
    v[i] = f(xy[0], xy[1]);
  }
  return GridFunction(d, std::move(v));
}

void require_same_domain(const DomainSpec& a, const DomainSpec& b,
                         const char* what) {
  if (!(a == b))
    throw MismatchError(std::string(what) + ": domains do not match");
}

double lq_norm(const GridFunction& f, double q) {
  if (std::isinf(q)) return f.values.cwiseAbs().maxCoeff();
  if (!(q >= 1.0)) throw Error("lq_norm: exponent must satisfy q >= 1");
  const double w = f.domain.quad_weight();
  double acc = 0.0;
  for (int i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f.values[i]), q);
  return std::pow(w * acc, 1.0 / q);
}

double lq_dist(const GridFunction& a, const GridFunction& b, double q) {
  require_same_domain(a.domain, b.domain, "lq_dist");
  if (std::isinf(q)) return (a.values - b.values).cwiseAbs().maxCoeff();
  if (!(q >= 1.0)) throw Error("lq_dist: exponent must satisfy q >= 1");
  const double w = a.domain.quad_weight();
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i)
    acc += std::pow(std::abs(a.values[i] - b.values[i]), q);
  return std::pow(w * acc, 1.0 / q);
}

namespace {

// 8-point Gauss-Legendre on [-1,1]
constexpr int kGaussN = 8;
constexpr double kGaussX[kGaussN] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGaussW[kGaussN] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

std::vector<double> panel_breaks(double a, double b,
                                 const std::vector<double>& singular,
                                 const RefinedQuadOptions& opt) {
  std::set<double> pts;
  const double len = b - a;
  for (int i = 0; i <= opt.base_panels; ++i)
    pts.insert(a + len * i / opt.base_panels);
  const double width = opt.grading_width * len;
  for (double s : singular) {
    if (s < a - 1e-14 || s > b + 1e-14) continue;
    for (int j = 0; j <= opt.grading_levels; ++j) {
      const double d = width * std::pow(0.5, j);
      if (s + d < b) pts.insert(s + d);
      if (s - d > a) pts.insert(s - d);
    }
  }
  std::vector<double> out(pts.begin(), pts.end());
  if (out.empty() || out.front() > a) out.insert(out.begin(), a);
  if (out.back() < b) out.push_back(b);
  return out;
}

double gauss_on_breaks(const std::function<double(double)>& f,
                       const std::vector<double>& breaks) {
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int g = 0; g < kGaussN; ++g)
      acc += half * kGaussW[g] * f(mid + half * kGaussX[g]);
  }
  return acc;
}

}  // namespace

double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, const std::vector<double>& singular,
                          const RefinedQuadOptions& opt) {
  return gauss_on_breaks(f, panel_breaks(a, b, singular, opt));
}

void refined_axis_rule(double a, double b, const std::vector<double>& singular,
                       const RefinedQuadOptions& opt,
                       std::vector<double>& points,
                       std::vector<double>& weights) {
  const auto breaks = panel_breaks(a, b, singular, opt);
  points.clear();
  weights.clear();
  points.reserve((breaks.size() - 1) * kGaussN);
  weights.reserve((breaks.size() - 1) * kGaussN);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    for (int g = 0; g < kGaussN; ++g) {
      points.push_back(mid + half * kGaussX[g]);
      weights.push_back(half * kGaussW[g]);
    }
  }
}

double refined_lq_norm(const DomainSpec& domain,
                       const std::function<double(double, double)>& f, double q,
                       const std::vector<std::array<double, 2>>& singular,
                       const RefinedQuadOptions& opt) {
  if (!std::isinf(q) && !(q >= 1.0))
    throw Error("refined_lq_norm: exponent must satisfy q >= 1");

  std::vector<double> sx, sy;
  for (const auto& s : singular) {
    sx.push_back(s[0]);
    sy.push_back(s[1]);
  }
  const auto bx = panel_breaks(0.0, domain.extent[0], sx, opt);

  if (domain.dim == 1) {
    if (std::isinf(q)) {
      double m = 0.0;
      for (std::size_t p = 0; p + 1 < bx.size(); ++p) {
        const double mid = 0.5 * (bx[p] + bx[p + 1]),
                     half = 0.5 * (bx[p + 1] - bx[p]);
        for (int g = 0; g < kGaussN; ++g)
          m = std::max(m, std::abs(f(mid + half * kGaussX[g], 0.0)));
      }
      return m;
    }
    const double val = gauss_on_breaks(
        [&](double x) { return std::pow(std::abs(f(x, 0.0)), q); }, bx);
    return std::pow(std::max(val, 0.0), 1.0 / q);
  }

  const auto by = panel_breaks(0.0, domain.extent[1], sy, opt);
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t p = 0; p + 1 < by.size(); ++p) {
      const double midy = 0.5 * (by[p] + by[p + 1]),
                   halfy = 0.5 * (by[p + 1] - by[p]);
      for (int gy = 0; gy < kGaussN; ++gy) {
        const double y = midy + halfy * kGaussX[gy];
        for (std::size_t px = 0; px + 1 < bx.size(); ++px) {
          const double midx = 0.5 * (bx[px] + bx[px + 1]),
                       halfx = 0.5 * (bx[px + 1] - bx[px]);
          for (int gx = 0; gx < kGaussN; ++gx)
            m = std::max(m, std::abs(f(midx + halfx * kGaussX[gx], y)));
        }
      }
    }
    return m;
  }
  const double val = gauss_on_breaks(
      [&](double y) {
        return gauss_on_breaks(
            [&](double x) { return std::pow(std::abs(f(x, y)), q); }, bx);
      },
      by);
  return std::pow(std::max(val, 0.0), 1.0 / q);
}

}  // namespace rdlab

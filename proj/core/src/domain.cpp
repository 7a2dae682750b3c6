#include "fracweyl/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "fracweyl/errors.hpp"
#include "fracweyl/quadrature.hpp"

namespace fracweyl {

namespace {

using Eigen::Vector2d;

double shoelace_area(const std::vector<Vector2d>& v) {
  double s = 0.0;
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vector2d& a = v[i];
    const Vector2d& b = v[(i + 1) % n];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

double cross(const Vector2d& o, const Vector2d& a, const Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool on_segment(const Vector2d& p, const Vector2d& q, const Vector2d& r) {
  return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
         std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
}

// Closed-segment intersection test, touches included.
bool segments_intersect(const Vector2d& p1, const Vector2d& p2, const Vector2d& q1,
                        const Vector2d& q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, p1, q2)) return true;
  if (d2 == 0 && on_segment(q1, p2, q2)) return true;
  if (d3 == 0 && on_segment(p1, q1, p2)) return true;
  if (d4 == 0 && on_segment(p1, q2, p2)) return true;
  return false;
}

double point_segment_distance(const Vector2d& p, const Vector2d& a, const Vector2d& b) {
  const Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool point_in_polygon(const std::vector<Vector2d>& v, const Vector2d& p) {
  bool inside = false;
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vector2d& a = v[i];
    const Vector2d& b = v[(i + 1) % n];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xint = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < xint) inside = !inside;
    }
  }
  return inside;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

Domain Domain::interval(double x0, double x1) {
  if (!(x0 < x1)) throw std::invalid_argument("interval: requires x0 < x1");
  return Domain(1, IntervalShape{x0, x1});
}

Domain Domain::rectangle(const Vector2d& lo, const Vector2d& hi) {
  if (!(lo.x() < hi.x() && lo.y() < hi.y()))
    throw std::invalid_argument("rectangle: requires lo < hi componentwise");
  return Domain(2, RectShape{lo, hi});
}

Domain Domain::disk(const Vector2d& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("disk: requires radius > 0");
  return Domain(2, DiskShape{center, radius});
}

Domain Domain::polygon(std::vector<Vector2d> vertices) {
  const size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("polygon: fewer than 3 vertices");
  for (size_t i = 0; i < n; ++i)
    if ((vertices[i] - vertices[(i + 1) % n]).norm() == 0.0)
      throw std::invalid_argument("polygon: repeated consecutive vertices");
  // Non-adjacent edges must not intersect or touch.
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                             vertices[(j + 1) % n]))
        throw std::invalid_argument("polygon: self-intersecting boundary");
    }
  }
  const double area = shoelace_area(vertices);
  if (area == 0.0) throw std::invalid_argument("polygon: degenerate (zero area)");
  if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
  return Domain(2, PolyShape{std::move(vertices)});
}

double Domain::signed_distance(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("signed_distance: point dimension mismatch");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalShape>) {
          return std::min(x(0) - s.x0, s.x1 - x(0));
        } else if constexpr (std::is_same_v<T, RectShape>) {
          const Vector2d p(x(0), x(1));
          const Vector2d q = (p - s.lo).cwiseMin(s.hi - p);
          const double inside = q.minCoeff();
          if (inside >= 0) return inside;
          const Vector2d ex = (-q).cwiseMax(0.0);
          return -ex.norm();
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          return s.r - (Vector2d(x(0), x(1)) - s.c).norm();
        } else if constexpr (std::is_same_v<T, PolyShape>) {
          const Vector2d p(x(0), x(1));
          double d = std::numeric_limits<double>::infinity();
          const size_t n = s.v.size();
          for (size_t i = 0; i < n; ++i)
            d = std::min(d, point_segment_distance(p, s.v[i], s.v[(i + 1) % n]));
          if (d == 0.0) return 0.0;
          return point_in_polygon(s.v, p) ? d : -d;
        } else {
          static_assert(std::is_same_v<T, OffsetShape>);
          return s.base->signed_distance(x) - s.delta;
        }
      },
      shape_);
}

bool Domain::contains(const Eigen::VectorXd& x) const { return signed_distance(x) > 0.0; }

double Domain::boundary_distance(const Eigen::VectorXd& x) const {
  return std::abs(signed_distance(x));
}

BoundingBox Domain::bounding_box() const {
  return std::visit(
      [&](const auto& s) -> BoundingBox {
        using T = std::decay_t<decltype(s)>;
        BoundingBox bb;
        bb.lo.resize(dim_);
        bb.hi.resize(dim_);
        if constexpr (std::is_same_v<T, IntervalShape>) {
          bb.lo(0) = s.x0;
          bb.hi(0) = s.x1;
        } else if constexpr (std::is_same_v<T, RectShape>) {
          bb.lo = s.lo;
          bb.hi = s.hi;
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          bb.lo = s.c.array() - s.r;
          bb.hi = s.c.array() + s.r;
        } else if constexpr (std::is_same_v<T, PolyShape>) {
          Vector2d lo = s.v[0], hi = s.v[0];
          for (const auto& p : s.v) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
          }
          bb.lo = lo;
          bb.hi = hi;
        } else {
          static_assert(std::is_same_v<T, OffsetShape>);
          BoundingBox base = s.base->bounding_box();
          bb.lo = base.lo.array() + s.delta;
          bb.hi = base.hi.array() - s.delta;
        }
        return bb;
      },
      shape_);
}

double Domain::diameter() const {
  BoundingBox bb = bounding_box();
  return (bb.hi - bb.lo).norm();
}

std::optional<double> Domain::exact_volume() const {
  return std::visit(
      [&](const auto& s) -> std::optional<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalShape>)
          return s.x1 - s.x0;
        else if constexpr (std::is_same_v<T, RectShape>)
          return (s.hi - s.lo).prod();
        else if constexpr (std::is_same_v<T, DiskShape>)
          return std::numbers::pi * s.r * s.r;
        else if constexpr (std::is_same_v<T, PolyShape>)
          return shoelace_area(s.v);
        else
          return std::nullopt;
      },
      shape_);
}

Domain Domain::eroded(double r) const {
  if (!(r > 0)) throw std::invalid_argument("eroded: requires r > 0");
  if (const auto* s = std::get_if<IntervalShape>(&shape_)) {
    if (!(s->x0 + r < s->x1 - r)) throw numeric_error("eroded: interval erosion is empty");
    return interval(s->x0 + r, s->x1 - r);
  }
  if (const auto* s = std::get_if<RectShape>(&shape_)) {
    const Vector2d lo = s->lo.array() + r;
    const Vector2d hi = s->hi.array() - r;
    if (!(lo.x() < hi.x() && lo.y() < hi.y()))
      throw numeric_error("eroded: rectangle erosion is empty");
    return rectangle(lo, hi);
  }
  if (const auto* s = std::get_if<DiskShape>(&shape_)) {
    if (!(s->r > r)) throw numeric_error("eroded: disk erosion is empty");
    return disk(s->c, s->r - r);
  }
  // Predicate erosion; probe a lattice over the bounding box for a point
  // deeper than r to reject empty results.
  BoundingBox bb = bounding_box();
  const int probes = 160;
  double best = -std::numeric_limits<double>::infinity();
  if (dim_ == 1) {
    Eigen::VectorXd x(1);
    for (int i = 0; i <= probes; ++i) {
      x(0) = bb.lo(0) + (bb.hi(0) - bb.lo(0)) * i / probes;
      best = std::max(best, signed_distance(x));
    }
  } else {
    Eigen::VectorXd x(2);
    for (int i = 0; i <= probes; ++i)
      for (int j = 0; j <= probes; ++j) {
        x(0) = bb.lo(0) + (bb.hi(0) - bb.lo(0)) * i / probes;
        x(1) = bb.lo(1) + (bb.hi(1) - bb.lo(1)) * j / probes;
        best = std::max(best, signed_distance(x));
      }
  }
  if (best <= r)
    throw numeric_error("eroded: erosion is empty (no interior point deeper than r)");
  return Domain(dim_, OffsetShape{std::make_shared<Domain>(*this), r});
}

Domain Domain::dilated(double r) const {
  if (!(r > 0)) throw std::invalid_argument("dilated: requires r > 0");
  if (const auto* s = std::get_if<IntervalShape>(&shape_))
    return interval(s->x0 - r, s->x1 + r);
  if (const auto* s = std::get_if<DiskShape>(&shape_)) return disk(s->c, s->r + r);
  return Domain(dim_, OffsetShape{std::make_shared<Domain>(*this), -r});
}

Domain Domain::inner_approx(int j) const {
  if (j < 1) throw std::invalid_argument("inner_approx: requires j >= 1");
  return eroded(1.0 / j);
}

Domain Domain::outer_approx(int k) const {
  if (k < 1) throw std::invalid_argument("outer_approx: requires k >= 1");
  return dilated(1.0 / k);
}

std::string Domain::describe() const {
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalShape>) {
          return "interval(" + fmt(s.x0) + "," + fmt(s.x1) + ")";
        } else if constexpr (std::is_same_v<T, RectShape>) {
          return "rectangle((" + fmt(s.lo.x()) + "," + fmt(s.lo.y()) + "),(" +
                 fmt(s.hi.x()) + "," + fmt(s.hi.y()) + "))";
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          return "disk((" + fmt(s.c.x()) + "," + fmt(s.c.y()) + ")," + fmt(s.r) + ")";
        } else if constexpr (std::is_same_v<T, PolyShape>) {
          std::string out = "polygon(";
          for (size_t i = 0; i < s.v.size(); ++i) {
            if (i) out += ";";
            out += fmt(s.v[i].x()) + "," + fmt(s.v[i].y());
          }
          return out + ")";
        } else {
          static_assert(std::is_same_v<T, OffsetShape>);
          const char* op = s.delta > 0 ? "eroded(" : "dilated(";
          return op + s.base->describe() + "," + fmt(std::abs(s.delta)) + ")";
        }
      },
      shape_);
}

namespace {

// Midpoint cell quadrature with boundary-cell subdivision, for predicate
// domains.  Cells are classified by the signed distance at their center,
// which is 1-Lipschitz, so a cell whose center is deeper than half the cell
// diagonal is entirely inside or outside.
IntegralResult cell_quadrature(const Domain& dom,
                               const std::function<double(const Eigen::VectorXd&)>& f,
                               int res) {
  const BoundingBox bb = dom.bounding_box();
  const int sub = 8;
  double sum = 0.0;
  long boundary_cells = 0;
  if (dom.dimension() == 1) {
    const double h = (bb.hi(0) - bb.lo(0)) / res;
    Eigen::VectorXd x(1);
    for (int i = 0; i < res; ++i) {
      x(0) = bb.lo(0) + (i + 0.5) * h;
      const double sd = dom.signed_distance(x);
      if (sd > 0.5 * h) {
        sum += f(x) * h;
      } else if (std::abs(sd) <= 0.5 * h) {
        ++boundary_cells;
        Eigen::VectorXd y(1);
        for (int a = 0; a < sub; ++a) {
          y(0) = bb.lo(0) + (i + (a + 0.5) / sub) * h;
          if (dom.contains(y)) sum += f(y) * h / sub;
        }
      }
    }
    return {sum, boundary_cells * h / sub};
  }
  const double hx = (bb.hi(0) - bb.lo(0)) / res;
  const double hy = (bb.hi(1) - bb.lo(1)) / res;
  const double half_diag = 0.5 * std::hypot(hx, hy);
  const double cell_area = hx * hy;
  Eigen::VectorXd x(2);
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      x(0) = bb.lo(0) + (i + 0.5) * hx;
      x(1) = bb.lo(1) + (j + 0.5) * hy;
      const double sd = dom.signed_distance(x);
      if (sd > half_diag) {
        sum += f(x) * cell_area;
      } else if (std::abs(sd) <= half_diag) {
        ++boundary_cells;
        Eigen::VectorXd y(2);
        for (int a = 0; a < sub; ++a)
          for (int b = 0; b < sub; ++b) {
            y(0) = bb.lo(0) + (i + (a + 0.5) / sub) * hx;
            y(1) = bb.lo(1) + (j + (b + 0.5) / sub) * hy;
            if (dom.contains(y)) sum += f(y) * cell_area / (sub * sub);
          }
      }
    }
  }
  return {sum, boundary_cells * cell_area / sub};
}

// Scanline cross-section of a polygon: sorted union of y-intervals at
// abscissa x.  Valid for x strictly between vertex abscissas.
std::vector<std::pair<double, double>> polygon_slice(const std::vector<Vector2d>& v,
                                                     double x) {
  std::vector<double> ys;
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vector2d& a = v[i];
    const Vector2d& b = v[(i + 1) % n];
    if ((a.x() < x && b.x() > x) || (a.x() > x && b.x() < x))
      ys.push_back(a.y() + (x - a.x()) / (b.x() - a.x()) * (b.y() - a.y()));
  }
  std::sort(ys.begin(), ys.end());
  std::vector<std::pair<double, double>> out;
  for (size_t i = 0; i + 1 < ys.size(); i += 2) out.emplace_back(ys[i], ys[i + 1]);
  return out;
}

}  // namespace

IntegralResult integrate(const Domain& domain,
                         const std::function<double(const Eigen::VectorXd&)>& f,
                         int resolution) {
  if (resolution < 1) throw std::invalid_argument("integrate: resolution < 1");
  const int res = resolution;
  return std::visit(
      [&](const auto& s) -> IntegralResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Domain::IntervalShape>) {
          Eigen::VectorXd x(1);
          double val = integrate_gauss(
              [&](double t) {
                x(0) = t;
                return f(x);
              },
              s.x0, s.x1, res);
          return {val, 0.0};
        } else if constexpr (std::is_same_v<T, Domain::RectShape>) {
          const GaussRule& rule = gauss_legendre(8);
          const int panels = std::max(1, res / 8);
          auto nodes_1d = [&](double lo, double hi,
                             std::vector<std::pair<double, double>>& out) {
            out.clear();
            const double hp = (hi - lo) / panels;
            for (int p = 0; p < panels; ++p)
              for (size_t q = 0; q < rule.points.size(); ++q)
                out.emplace_back(lo + (p + 0.5 + 0.5 * rule.points[q]) * hp,
                                 0.5 * hp * rule.weights[q]);
          };
          std::vector<std::pair<double, double>> xs, ys;
          nodes_1d(s.lo.x(), s.hi.x(), xs);
          nodes_1d(s.lo.y(), s.hi.y(), ys);
          double sum = 0.0;
          Eigen::VectorXd x(2);
          for (const auto& [xv, xw] : xs)
            for (const auto& [yv, yw] : ys) {
              x(0) = xv;
              x(1) = yv;
              sum += xw * yw * f(x);
            }
          return {sum, 0.0};
        } else if constexpr (std::is_same_v<T, Domain::DiskShape>) {
          const int ntheta = std::max(16, 2 * res);
          const int rpanels = std::max(1, res / 4);
          double sum = 0.0;
          Eigen::VectorXd x(2);
          for (int k = 0; k < ntheta; ++k) {
            const double th = 2.0 * std::numbers::pi * k / ntheta;
            const double ct = std::cos(th), st = std::sin(th);
            sum += integrate_gauss(
                       [&](double r) {
                         x(0) = s.c.x() + r * ct;
                         x(1) = s.c.y() + r * st;
                         return r * f(x);
                       },
                       0.0, s.r, rpanels) *
                   (2.0 * std::numbers::pi / ntheta);
          }
          return {sum, 0.0};
        } else if constexpr (std::is_same_v<T, Domain::PolyShape>) {
          // Vertical strips between consecutive vertex abscissas: inside one
          // strip the cross-section interval count is constant and its bounds
          // are linear in x, so composed Gauss rules see a smooth integrand.
          std::vector<double> cuts;
          for (const auto& p : s.v) cuts.push_back(p.x());
          std::sort(cuts.begin(), cuts.end());
          cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
          double width = cuts.back() - cuts.front();
          double height = 0.0;
          {
            double ylo = s.v[0].y(), yhi = s.v[0].y();
            for (const auto& p : s.v) {
              ylo = std::min(ylo, p.y());
              yhi = std::max(yhi, p.y());
            }
            height = yhi - ylo;
          }
          double sum = 0.0;
          Eigen::VectorXd x(2);
          const GaussRule& rule = gauss_legendre(8);
          for (size_t sidx = 0; sidx + 1 < cuts.size(); ++sidx) {
            const double sa = cuts[sidx], sb = cuts[sidx + 1];
            const int panels = std::max(1, (int)std::lround(res * (sb - sa) / width));
            const double hp = (sb - sa) / panels;
            for (int p = 0; p < panels; ++p) {
              for (size_t q = 0; q < rule.points.size(); ++q) {
                const double xv = sa + (p + 0.5 + 0.5 * rule.points[q]) * hp;
                const double xw = 0.5 * hp * rule.weights[q];
                double inner = 0.0;
                for (const auto& [ylo, yhi] : polygon_slice(s.v, xv)) {
                  const int ip = std::max(1, (int)std::lround(res * (yhi - ylo) / height));
                  x(0) = xv;
                  inner += integrate_gauss(
                      [&](double y) {
                        x(1) = y;
                        return f(x);
                      },
                      ylo, yhi, ip);
                }
                sum += xw * inner;
              }
            }
          }
          return {sum, 0.0};
        } else {
          static_assert(std::is_same_v<T, Domain::OffsetShape>);
          return cell_quadrature(domain, f, domain.dimension() == 1 ? res * 8 : res);
        }
      },
      domain.shape_);
}

VolumeResult volume(const Domain& domain, int resolution) {
  if (auto v = domain.exact_volume()) return {*v, 0.0};
  IntegralResult r =
      integrate(domain, [](const Eigen::VectorXd&) { return 1.0; }, resolution);
  return {r.value, r.error_estimate};
}

}  // namespace fracweyl

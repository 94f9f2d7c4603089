#include "skewspin/geometry.hpp"

#include <cmath>
#include <sstream>

namespace skewspin {
namespace {

Jet zero(int order) { return Jet::constant(0.0, std::max(order, 0)); }

int min_order(const JetMat& m, int dim) {
  int o = kMaxOrder;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) o = std::min(o, m[i][j].order());
  return o;
}

}  // namespace

std::string format_point(const Point& p, int dim) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

FrameChart FrameChart::coordinate(std::vector<std::string> coordinates, std::vector<Interval> bounds,
                                  std::vector<std::vector<ScalarField>> frame) {
  FrameChart c;
  c.dim_ = static_cast<int>(coordinates.size());
  if (c.dim_ != 2 && c.dim_ != 3) throw std::invalid_argument("charts have dimension 2 or 3");
  if (static_cast<int>(bounds.size()) != c.dim_) throw std::invalid_argument("one bound per coordinate required");
  if (static_cast<int>(frame.size()) != c.dim_) throw std::invalid_argument("one frame vector per dimension required");
  for (const auto& row : frame)
    if (static_cast<int>(row.size()) != c.dim_) throw std::invalid_argument("frame vector has wrong length");
  for (const auto& b : bounds)
    if (!(b.lo < b.hi)) throw std::invalid_argument("chart bounds must satisfy lo < hi");
  c.coords_ = std::move(coordinates);
  c.bounds_ = std::move(bounds);
  c.frame_ = std::move(frame);
  return c;
}

FrameChart FrameChart::structural(std::vector<std::string> coordinates, std::vector<Interval> bounds,
                                  std::vector<std::vector<std::vector<ScalarField>>> cs) {
  const int dim = static_cast<int>(coordinates.size());
  std::vector<std::vector<ScalarField>> identity(dim, std::vector<ScalarField>(dim));
  for (int i = 0; i < dim; ++i) identity[i][i] = ScalarField::constant(1.0);
  FrameChart c = coordinate(std::move(coordinates), std::move(bounds), std::move(identity));
  c.structural_ = true;
  if (static_cast<int>(cs.size()) != dim) throw std::invalid_argument("structure constants have wrong shape");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        if (!cs[i][j][k].is_constant())
          throw std::invalid_argument("structure constants of an abstract frame must be constant");
        const double cij = cs[i][j][k].value({}), cji = cs[j][i][k].value({});
        if (std::abs(cij + cji) > 1e-12)
          throw std::invalid_argument("structure constants must satisfy c_ij^k = -c_ji^k");
      }
  c.structure_ = std::move(cs);
  return c;
}

FrameChart FrameChart::diagonal_metric(std::vector<std::string> coordinates, std::vector<Interval> bounds,
                                       const std::vector<Expr>& g, const std::map<std::string, double>& params) {
  const int dim = static_cast<int>(coordinates.size());
  if (static_cast<int>(g.size()) != dim) throw std::invalid_argument("one metric coefficient per coordinate required");
  std::vector<std::vector<ScalarField>> frame(dim, std::vector<ScalarField>(dim));
  std::vector<ScalarField> metric;
  for (int i = 0; i < dim; ++i) {
    frame[i][i] = ScalarField::from_expr(Expr::binary(Op::Pow, g[i], Expr::number(-0.5)), coordinates, params);
    metric.push_back(ScalarField::from_expr(g[i], coordinates, params));
  }
  FrameChart c = coordinate(coordinates, std::move(bounds), std::move(frame));
  c.metric_ = std::move(metric);
  return c;
}

FrameChart FrameChart::rescaled(const ScalarField& u) const {
  if (structural_) throw GeometryError("conformal rescaling needs a coordinate-realised frame");
  FrameChart c = *this;
  if (log_scale_) {
    const ScalarField prev = *log_scale_;
    c.log_scale_ = ScalarField::from_function(
        [prev, u](const Point& p, int order, const EvalOptions& opts) {
          return prev.jet(p, order, opts) + u.jet(p, order, opts);
        },
        dim_, "log-scale");
  } else {
    c.log_scale_ = u;
  }
  c.metric_.reset();
  return c;
}

FrameChart FrameChart::with_bounds(std::vector<Interval> bounds) const {
  if (static_cast<int>(bounds.size()) != dim_) throw std::invalid_argument("one bound per coordinate required");
  FrameChart c = *this;
  c.bounds_ = std::move(bounds);
  return c;
}

Point FrameChart::center() const {
  Point p{0.0, 0.0, 0.0};
  for (int i = 0; i < dim_; ++i) p[i] = 0.5 * (bounds_[i].lo + bounds_[i].hi);
  return p;
}

bool FrameChart::contains(const Point& p) const {
  for (int i = 0; i < dim_; ++i)
    if (p[i] < bounds_[i].lo || p[i] > bounds_[i].hi) return false;
  return true;
}

std::vector<Point> FrameChart::grid(int n) const {
  if (n < 1) throw std::invalid_argument("grid needs at least one point per axis");
  std::vector<std::vector<double>> axes(dim_);
  for (int i = 0; i < dim_; ++i) {
    const double w = bounds_[i].hi - bounds_[i].lo;
    const double lo = bounds_[i].lo + 0.05 * w, hi = bounds_[i].hi - 0.05 * w;
    if (n == 1) {
      axes[i].push_back(0.5 * (lo + hi));
      continue;
    }
    for (int k = 0; k < n; ++k) axes[i].push_back(lo + (hi - lo) * k / (n - 1));
  }
  std::vector<Point> pts;
  if (dim_ == 2) {
    for (double x : axes[0])
      for (double y : axes[1]) pts.push_back({x, y, 0.0});
  } else {
    for (double x : axes[0])
      for (double y : axes[1])
        for (double z : axes[2]) pts.push_back({x, y, z});
  }
  return pts;
}

JetMat FrameChart::frame_jets(const Point& p, int order, const EvalOptions& opts) const {
  JetMat a;
  std::optional<Jet> scale;
  if (log_scale_) scale = exp(-log_scale_->jet(p, order, opts));
  for (int i = 0; i < dim_; ++i)
    for (int mu = 0; mu < dim_; ++mu) {
      a[i][mu] = frame_[i][mu].jet(p, order, opts);
      if (scale) a[i][mu] = a[i][mu] * *scale;
    }
  return a;
}

JetCube FrameChart::declared_structure(int order) const {
  JetCube c;
  if (!structural_) throw GeometryError("chart does not declare structure constants");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) c[i][j][k] = Jet::constant(structure_[i][j][k].value({}), order);
  return c;
}

double FrameChart::orthonormality_residual(const Point& p, const EvalOptions& opts) const {
  if (!metric_) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      double g = 0.0;
      for (int mu = 0; mu < dim_; ++mu)
        g += (*metric_)[mu].value(p, opts) * frame_[i][mu].value(p, opts) * frame_[j][mu].value(p, opts);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

JetMat inverse(const JetMat& m, int dim, const Point& where) {
  JetMat inv;
  if (dim == 2) {
    const Jet det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det.value()) < 1e-12) throw GeometryError("degenerate frame at " + format_point(where, dim));
    const Jet r = recip(det);
    inv[0][0] = m[1][1] * r;
    inv[0][1] = -m[0][1] * r;
    inv[1][0] = -m[1][0] * r;
    inv[1][1] = m[0][0] * r;
    return inv;
  }
  const Jet det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                  m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                  m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det.value()) < 1e-12) throw GeometryError("degenerate frame at " + format_point(where, dim));
  const Jet r = recip(det);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      inv[i][j] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]) * r;
    }
  return inv;
}

Jet ConnectionData::frame_derivative(const Jet& f, int i) const {
  if (structural) {
    if (!f.is_constant())
      throw GeometryError("fields on an abstract frame must be constant; realise the frame in coordinates instead");
    return zero(f.order() - 1);
  }
  Jet out = a[i][0] * f.diff(0);
  for (int mu = 1; mu < dim; ++mu) out += a[i][mu] * f.diff(mu);
  return out;
}

Jet ConnectionData::derivative_along(const JetVec& x, const Jet& f) const {
  Jet out = x[0] * frame_derivative(f, 0);
  for (int i = 1; i < dim; ++i) out += x[i] * frame_derivative(f, i);
  return out;
}

JetVec ConnectionData::covariant(const JetVec& y, int i) const {
  JetVec out;
  for (int k = 0; k < dim; ++k) {
    Jet v = frame_derivative(y[k], i);
    for (int j = 0; j < dim; ++j) v += y[j] * gamma[i][j][k];
    out[k] = v;
  }
  return out;
}

JetVec ConnectionData::covariant_along(const JetVec& x, const JetVec& y) const {
  JetVec out;
  for (int i = 0; i < dim; ++i) {
    const JetVec d = covariant(y, i);
    for (int k = 0; k < dim; ++k) out[k] = i == 0 ? x[i] * d[k] : out[k] + x[i] * d[k];
  }
  return out;
}

JetVec ConnectionData::to_coordinate_covector(const JetVec& w) const {
  JetVec out;
  for (int mu = 0; mu < dim; ++mu) {
    Jet v = w[0] * theta[mu][0];
    for (int k = 1; k < dim; ++k) v += w[k] * theta[mu][k];
    out[mu] = v;
  }
  return out;
}

ConnectionData christoffel(const FrameChart& chart, const Point& p, int order, const EvalOptions& opts) {
  if (order < 1) throw std::invalid_argument("connection needs frame jets of order >= 1");
  ConnectionData conn;
  const int dim = chart.dim();
  conn.dim = dim;
  conn.structural = chart.is_structural();
  conn.point = p;
  conn.a = chart.frame_jets(p, order, opts);
  conn.order = min_order(conn.a, dim);
  if (conn.order < 1) throw GeometryError("frame jets lack derivatives");
  conn.theta = inverse(conn.a, dim, p);
  if (conn.structural) {
    conn.c = chart.declared_structure(conn.order - 1);
  } else {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          Jet v = zero(conn.order - 1);
          if (i != j)
            for (int mu = 0; mu < dim; ++mu)
              v += (conn.frame_derivative(conn.a[j][mu], i) - conn.frame_derivative(conn.a[i][mu], j)) *
                   conn.theta[mu][k];
          conn.c[i][j][k] = v;
        }
  }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        conn.gamma[i][j][k] = (conn.c[i][j][k] - conn.c[j][k][i] + conn.c[k][i][j]) * 0.5;
  return conn;
}

CurvatureData riemann(const ConnectionData& conn) {
  if (conn.order < 2) throw std::invalid_argument("curvature needs frame jets of order >= 2");
  const int dim = conn.dim;
  const auto& G = conn.gamma;
  CurvatureData cd;
  cd.dim = dim;
  const int order = conn.order - 2;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int m = 0; m < dim; ++m) {
          Jet v = conn.frame_derivative(G[j][k][m], i) - conn.frame_derivative(G[i][k][m], j);
          for (int l = 0; l < dim; ++l) {
            v += G[j][k][l] * G[i][l][m] - G[i][k][l] * G[j][l][m];
            v -= conn.c[i][j][l] * G[l][k][m];
          }
          cd.R[i][j][k][m] = v.truncated(order);
        }
  cd.scal = zero(order);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) {
      Jet v = zero(order);
      for (int i = 0; i < dim; ++i) v += cd.R[i][j][k][i];
      cd.ricci[j][k] = v;
    }
  for (int i = 0; i < dim; ++i) cd.scal += cd.ricci[i][i];
  if (dim == 3)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) cd.schouten[j][k] = (j == k ? cd.scal * 0.25 : zero(order)) - cd.ricci[j][k];
  return cd;
}

double schouten_symmetry_residual(const ConnectionData& conn, const CurvatureData& curv) {
  if (conn.dim != 3) throw std::invalid_argument("the Schouten symmetry test is three-dimensional");
  const auto& P = curv.schouten;
  const auto& G = conn.gamma;
  auto nabla_p = [&](int i, int j, int k) {  // [(nabla_i P) E_j]^k
    Jet v = conn.frame_derivative(P[k][j], i);
    for (int l = 0; l < 3; ++l) v += P[l][j] * G[i][l][k] - G[i][j][l] * P[k][l];
    return v.value();
  };
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double n2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double d = nabla_p(i, j, k) - nabla_p(j, i, k);
        n2 += d * d;
      }
      worst = std::max(worst, std::sqrt(n2));
    }
  return worst;
}

double schouten_symmetry_residual(const FrameChart& chart, int grid_n, const EvalOptions& opts) {
  double worst = 0.0;
  for (const Point& p : chart.grid(grid_n)) {
    const ConnectionData conn = christoffel(chart, p, 3, opts);
    worst = std::max(worst, schouten_symmetry_residual(conn, riemann(conn)));
  }
  return worst;
}

double curvature_symmetry_residual(const CurvatureData& curv) {
  const int d = curv.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double r = curv.R[i][j][k][l].value();
          worst = std::max(worst, std::abs(r + curv.R[j][i][k][l].value()));
          worst = std::max(worst, std::abs(r + curv.R[i][j][l][k].value()));
          worst = std::max(worst, std::abs(r - curv.R[k][l][i][j].value()));
        }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) worst = std::max(worst, std::abs(curv.ricci[i][j].value() - curv.ricci[j][i].value()));
  return worst;
}

double bianchi_residual(const CurvatureData& curv) {
  const int d = curv.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          worst = std::max(worst, std::abs(curv.R[i][j][k][l].value() + curv.R[j][k][i][l].value() +
                                           curv.R[k][i][j][l].value()));
  return worst;
}

double jacobi_residual(const ConnectionData& conn) {
  const int d = conn.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m) {
          double v = 0.0;
          const int idx[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
          for (const auto& t : idx) {
            for (int l = 0; l < d; ++l) v += conn.c[t[0]][t[1]][l].value() * conn.c[l][t[2]][m].value();
            if (conn.c[t[0]][t[1]][m].order() >= 1) v -= conn.frame_derivative(conn.c[t[0]][t[1]][m], t[2]).value();
          }
          worst = std::max(worst, std::abs(v));
        }
  return worst;
}

double koszul_antisymmetry_residual(const ConnectionData& conn) {
  double worst = 0.0;
  for (int i = 0; i < conn.dim; ++i)
    for (int j = 0; j < conn.dim; ++j)
      for (int k = 0; k < conn.dim; ++k)
        worst = std::max(worst, std::abs(conn.gamma[i][j][k].value() + conn.gamma[i][k][j].value()));
  return worst;
}

JetMat d_oneform(const ConnectionData& conn, const JetVec& alpha) {
  const int d = conn.dim;
  std::array<JetVec, 3> nabla;  // nabla[i][j] = (nabla_{E_i} alpha)(E_j)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet v = conn.frame_derivative(alpha[j], i);
      for (int l = 0; l < d; ++l) v -= conn.gamma[i][j][l] * alpha[l];
      nabla[i][j] = v;
    }
  JetMat out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i][j] = nabla[i][j] - nabla[j][i];
  return out;
}

JetMat d_oneform_brackets(const ConnectionData& conn, const JetVec& alpha) {
  const int d = conn.dim;
  JetMat out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet v = conn.frame_derivative(alpha[j], i) - conn.frame_derivative(alpha[i], j);
      for (int k = 0; k < d; ++k) v -= conn.c[i][j][k] * alpha[k];
      out[i][j] = v;
    }
  return out;
}

double two_form_norm(const JetMat& w, int dim) {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) worst = std::max(worst, std::abs(w[i][j].value()));
  return worst;
}

}  // namespace skewspin

#include "mosharp/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"

namespace mosharp {

SampledField::SampledField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) { measure(); }

SampledField::SampledField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidArgument("field values do not match the grid size");
  measure();
}

void SampledField::measure() {
  const int n = grid_.dimension();
  const int p = grid_.points();
  Index lo{p, p, p}, hi{-1, -1, -1};
  bool any = false;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] == 0.0) continue;
    any = true;
    const Index idx = grid_.index(k);
    for (int a = 0; a < n; ++a) {
      lo[a] = std::min(lo[a], idx[a]);
      hi[a] = std::max(hi[a], idx[a]);
    }
  }
  if (!any) {
    margin_cells_ = (p - 1) / 2;
    nonzero_lo_ = {1, 1, 1};
    nonzero_hi_ = {0, 0, 0};
    return;
  }
  int margin = p;
  for (int a = 0; a < n; ++a) margin = std::min({margin, lo[a], p - 1 - hi[a]});
  for (int a = n; a < 3; ++a) lo[a] = hi[a] = 0;
  margin_cells_ = margin;
  nonzero_lo_ = lo;
  nonzero_hi_ = hi;
}

void SampledField::require_margin_cells(int cells, const std::string& operation) const {
  if (margin_cells_ < cells)
    throw PreconditionError(operation + ": support margin of " + std::to_string(margin_cells_) +
                            " cells is below the required " + std::to_string(cells) + " cells");
}

SampledField SampledField::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return SampledField(grid_, std::move(v));
}

SampledField SampledField::plus(const SampledField& other, double other_factor) const {
  if (!(other.grid_ == grid_)) throw InvalidArgument("fields live on different grids");
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += other_factor * other.values_[k];
  return SampledField(grid_, std::move(v));
}

SampledField SampledField::subsampled(int stride) const {
  if (stride == 1) return *this;
  const Grid coarse = grid_.coarsened(stride);
  std::vector<double> v(coarse.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    Index idx = coarse.index(k);
    for (int a = 0; a < grid_.dimension(); ++a) idx[a] *= stride;
    v[k] = values_[grid_.flat(idx)];
  }
  return SampledField(coarse, std::move(v));
}

SampledField SampledField::shifted(int axis, int cells) const {
  if (axis < 0 || axis >= grid_.dimension()) throw InvalidArgument("shift axis out of range");
  if (!is_zero() && (nonzero_lo_[axis] + cells < 0 || nonzero_hi_[axis] + cells >= grid_.points()))
    throw PreconditionError("shift would move nonzero values off the grid");
  std::vector<double> v(values_.size(), 0.0);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] == 0.0) continue;
    Index idx = grid_.index(k);
    idx[axis] += cells;
    v[grid_.flat(idx)] = values_[k];
  }
  return SampledField(grid_, std::move(v));
}

std::vector<double> VectorField::magnitude() const {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) s += components[a][k] * components[a][k];
    out[k] = std::sqrt(s);
  }
  return out;
}

VectorField gradient(const SampledField& f) {
  f.require_margin_cells(1, "gradient");
  const Grid& g = f.grid();
  VectorField out;
  out.grid = g;
  const double inv = 1.0 / (2.0 * g.spacing());
  const auto& v = f.values();
  for (int a = 0; a < g.dimension(); ++a) {
    auto& comp = out.components[a];
    comp.assign(g.size(), 0.0);
    const std::ptrdiff_t s = g.stride(a);
    parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const Index idx = g.index(k);
        bool interior = true;
        for (int b = 0; b < g.dimension(); ++b) interior = interior && idx[b] > 0 && idx[b] < g.points() - 1;
        if (!interior) continue;
        comp[k] = (v[k + s] - v[k - s]) * inv;
      }
    });
  }
  return out;
}

void write_binary(const SampledField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  const char magic[4] = {'M', 'O', 'S', 'F'};
  const std::int32_t dim = f.grid().dimension();
  const std::int32_t pts = f.grid().points();
  const double L = f.grid().half_width();
  const double h = f.grid().spacing();
  os.write(magic, 4);
  os.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  os.write(reinterpret_cast<const char*>(&pts), sizeof pts);
  os.write(reinterpret_cast<const char*>(&L), sizeof L);
  os.write(reinterpret_cast<const char*>(&h), sizeof h);
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!os) throw InvalidArgument("failed writing " + path);
}

SampledField read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path);
  char magic[4];
  std::int32_t dim = 0, pts = 0;
  double L = 0.0, h = 0.0;
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "MOSF", 4) != 0) throw InvalidArgument(path + " is not a field file");
  is.read(reinterpret_cast<char*>(&dim), sizeof dim);
  is.read(reinterpret_cast<char*>(&pts), sizeof pts);
  is.read(reinterpret_cast<char*>(&L), sizeof L);
  is.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!is) throw InvalidArgument(path + ": truncated header");
  Grid g = Grid::with_spacing(dim, L, h);
  if (g.points() != pts) throw InvalidArgument(path + ": inconsistent header");
  std::vector<double> values(g.size());
  is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!is) throw InvalidArgument(path + ": truncated data");
  return SampledField(g, std::move(values));
}

void write_csv(const SampledField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  const Grid& g = f.grid();
  os << "index";
  for (int a = 0; a < g.dimension(); ++a) os << ",x" << a;
  os << ",value\n";
  char buf[64];
  const auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    os.write(buf, res.ptr - buf);
  };
  for (std::size_t k = 0; k < g.size(); ++k) {
    os << k;
    const Point x = g.point(k);
    for (int a = 0; a < g.dimension(); ++a) {
      os << ',';
      put(x[a]);
    }
    os << ',';
    put(f[k]);
    os << '\n';
  }
}

}  // namespace mosharp

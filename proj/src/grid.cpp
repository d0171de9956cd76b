#include "predprey/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace predprey {

double Grid::weight(int ix, int iy) const {
    double w = spacing[0] * ((ix == 0 || ix == nx() - 1) ? 0.5 : 1.0);
    if (dim == 2) w *= spacing[1] * ((iy == 0 || iy == ny() - 1) ? 0.5 : 1.0);
    return w;
}

Grid build_grid(int dim, const std::vector<double>& lengths, const std::vector<int>& points) {
    if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
    if (lengths.size() != static_cast<size_t>(dim) || points.size() != static_cast<size_t>(dim)) {
        throw ConfigError("grid lengths/points must match the dimension");
    }
    Grid g;
    g.dim = dim;
    for (int ax = 0; ax < dim; ++ax) {
        if (!(lengths[ax] > 0.0)) throw ConfigError("grid lengths must be positive");
        if (points[ax] < 3) throw ConfigError("grid needs at least 3 points per axis");
        g.length[ax] = lengths[ax];
        g.points[ax] = points[ax];
        g.spacing[ax] = lengths[ax] / (points[ax] - 1);
    }
    if (dim == 1) {
        g.points[1] = 1;
        g.length[1] = 0.0;
        g.spacing[1] = 0.0;
    }
    return g;
}

double Field::min() const { return *std::min_element(values.begin(), values.end()); }
double Field::max() const { return *std::max_element(values.begin(), values.end()); }

double Field::mean() const {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double Field::stddev() const {
    const double mu = mean();
    double acc = 0.0;
    for (double v : values) acc += (v - mu) * (v - mu);
    return std::sqrt(acc / static_cast<double>(values.size()));
}

bool Field::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field apply_laplacian(const Grid& grid, const Field& field) {
    if (field.values.size() != static_cast<size_t>(grid.total())) {
        throw DomainError("apply_laplacian: field does not conform to grid");
    }
    const int nx = grid.nx();
    const int ny = grid.ny();
    Field out(grid.total(), 0.0, field.name);
    const double ihx2 = 1.0 / (grid.spacing[0] * grid.spacing[0]);
    const double ihy2 = grid.dim == 2 ? 1.0 / (grid.spacing[1] * grid.spacing[1]) : 0.0;
    const auto& u = field.values;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int id = grid.index(ix, iy);
            // mirror ghosts: u(-1) = u(1), u(n) = u(n-2)
            const int xm = ix == 0 ? 1 : ix - 1;
            const int xp = ix == nx - 1 ? nx - 2 : ix + 1;
            double lap = (u[grid.index(xm, iy)] - 2.0 * u[id] + u[grid.index(xp, iy)]) * ihx2;
            if (grid.dim == 2) {
                const int ym = iy == 0 ? 1 : iy - 1;
                const int yp = iy == ny - 1 ? ny - 2 : iy + 1;
                lap += (u[grid.index(ix, ym)] - 2.0 * u[id] + u[grid.index(ix, yp)]) * ihy2;
            }
            out.values[id] = lap;
        }
    }
    return out;
}

double integrate(const Grid& grid, const Field& field) {
    if (field.values.size() != static_cast<size_t>(grid.total())) {
        throw DomainError("integrate: field does not conform to grid");
    }
    double acc = 0.0;
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            acc += grid.weight(ix, iy) * field.values[grid.index(ix, iy)];
        }
    }
    return acc;
}

double sup_distance(const Field& f1, const Field& f2) {
    if (f1.values.size() != f2.values.size()) throw DomainError("sup_distance: size mismatch");
    double best = 0.0;
    for (size_t i = 0; i < f1.values.size(); ++i) {
        best = std::max(best, std::abs(f1.values[i] - f2.values[i]));
    }
    return best;
}

void write_fields_csv(const Grid& grid, const std::vector<const Field*>& fields, std::ostream& os) {
    os << "x";
    if (grid.dim == 2) os << ",y";
    for (const Field* f : fields) os << ',' << (f->name.empty() ? "field" : f->name);
    os << '\n';
    os.precision(17);
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            os << grid.x(ix);
            if (grid.dim == 2) os << ',' << grid.y(iy);
            for (const Field* f : fields) os << ',' << f->values[grid.index(ix, iy)];
            os << '\n';
        }
    }
}

void write_fields_binary(const std::vector<const Field*>& fields, std::ostream& os) {
    for (const Field* f : fields) {
        os.write(reinterpret_cast<const char*>(f->values.data()),
                 static_cast<std::streamsize>(f->values.size() * sizeof(double)));
    }
}

} // namespace predprey

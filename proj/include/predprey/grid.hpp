#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "predprey/errors.hpp"

namespace predprey {

/// Uniform vertex-centered grid on a 1D interval or 2D rectangle with
/// Neumann closure via mirror ghost values. Spacing is L/(n-1) per axis.
struct Grid {
    int dim = 1;
    std::array<double, 2> length{1.0, 1.0};
    std::array<int, 2> points{3, 1};      // ny = 1 in 1D
    std::array<double, 2> spacing{0.0, 0.0};

    int nx() const { return points[0]; }
    int ny() const { return dim == 2 ? points[1] : 1; }
    int total() const { return nx() * ny(); }
    int index(int ix, int iy = 0) const { return iy * nx() + ix; }
    double x(int ix) const { return spacing[0] * ix; }
    double y(int iy) const { return dim == 2 ? spacing[1] * iy : 0.0; }
    /// Trapezoid quadrature weight of a node (cell measure).
    double weight(int ix, int iy = 0) const;
};

Grid build_grid(int dim, const std::vector<double>& lengths, const std::vector<int>& points);

/// Scalar function on a grid, stored row-major (x fastest).
struct Field {
    std::vector<double> values;
    std::string name;

    Field() = default;
    Field(int n, double fill, std::string tag = "") : values(n, fill), name(std::move(tag)) {}

    double min() const;
    double max() const;
    double mean() const;
    double stddev() const;  // population std across nodes
    bool all_finite() const;
    bool nonnegative() const { return min() >= 0.0; }
    bool strictly_positive() const { return min() > 0.0; }
};

/// Second-order mirror-ghost Laplacian. Shape mismatch throws DomainError.
Field apply_laplacian(const Grid& grid, const Field& field);

/// Trapezoid quadrature of the field over the domain (the discrete mass).
double integrate(const Grid& grid, const Field& field);

double sup_distance(const Field& f1, const Field& f2);

/// Snapshot writers: columns x[,y],<field names...> for CSV; raw little-endian
/// doubles field-by-field for binary.
void write_fields_csv(const Grid& grid, const std::vector<const Field*>& fields, std::ostream& os);
void write_fields_binary(const std::vector<const Field*>& fields, std::ostream& os);

} // namespace predprey

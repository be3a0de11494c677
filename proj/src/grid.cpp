#include "traitlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace traitlab {

Grid::Grid(double theta_min, double theta_max, int n)
    : theta_min_(theta_min), theta_max_(theta_max), n_(n) {
    if (n < 3) throw ValidationError("grid: need at least 3 nodes");
    if (!(theta_max > theta_min)) throw ValidationError("grid: theta_max must exceed theta_min");
    h_ = (theta_max_ - theta_min_) / static_cast<double>(n_ - 1);
}

bool Grid::symmetric() const {
    return std::abs(theta_min_ + theta_max_) < 1e-12 * (theta_max_ - theta_min_) && n_ % 2 == 1;
}

Field::Field(Grid g, double time, std::vector<double> v) : grid(g), t(time), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n())
        throw ValidationError("field: value count does not match the grid");
}

double Field::max_value() const { return *std::max_element(values.begin(), values.end()); }
double Field::min_value() const { return *std::min_element(values.begin(), values.end()); }

bool Field::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

Field sample_initial(const InitialDataSpec& spec, const Grid& grid) {
    return sample_field(grid, 0.0, [&](double theta) { return spec.eval(theta); });
}

Field laplacian(const Field& field) {
    const int n = field.grid.n();
    const double inv_h2 = 1.0 / (field.grid.h() * field.grid.h());
    Field out(field.grid, field.t);
    const auto& u = field.values;
    for (int i = 0; i < n; ++i) {
        double left = (i > 0) ? u[i - 1] : 0.0;     // homogeneous Dirichlet ghosts
        double right = (i < n - 1) ? u[i + 1] : 0.0;
        out.values[i] = (left - 2.0 * u[i] + right) * inv_h2;
    }
    return out;
}

double total_mass(const Field& field) {
    const auto& u = field.values;
    const int n = field.grid.n();
    double acc = 0.5 * (u[0] + u[n - 1]);
    for (int i = 1; i < n - 1; ++i) acc += u[i];
    return acc * field.grid.h();
}

Field rhs(const ModelSpec& model, const Field& field) {
    const int n = field.grid.n();
    Field out = laplacian(field);
    const double rho = total_mass(field);
    for (int i = 0; i < n; ++i) {
        double u = field.values[i];
        double fu = u > 0.0 ? model.allee.eval(u) : 0.0;
        out.values[i] += model.fitness.eval(field.grid.node(i)) * u - rho * u - fu;
        if (!std::isfinite(out.values[i]))
            throw BlowupError("rhs: non-finite value at t=" + std::to_string(field.t) +
                                  ", node " + std::to_string(i),
                              field.t, i);
    }
    return out;
}

}  // namespace traitlab

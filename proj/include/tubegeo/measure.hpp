#pragma once

#include <functional>
#include <vector>

#include "tubegeo/circle.hpp"

namespace tubegeo {

/// weight * indicator(arc) dL restricted to the circle; weight is a vector,
/// one entry per coordinate of the measure tuple.
struct DensityPiece {
    Arc arc;
    std::vector<double> weight;
};

/// A Dirac point mass: mass vector placed at e^{i angle}.
struct MeasureAtom {
    double angle = 0.0;
    std::vector<double> mass;
};

/// A vector-valued real Borel measure on the unit circle restricted to the
/// closed class the geodesic families inhabit: finitely many atoms plus
/// piecewise-constant arc densities.  Pieces may overlap; densities add.
class CircleMeasure {
  public:
    explicit CircleMeasure(int dimension);

    int dimension() const { return n_; }
    const std::vector<DensityPiece>& pieces() const { return pieces_; }
    const std::vector<MeasureAtom>& atoms() const { return atoms_; }

    void add_piece(const Arc& arc, std::vector<double> weight);
    /// Atoms at coinciding angles (within arc_merge_tol) merge their masses.
    void add_atom(double angle, std::vector<double> mass);

    /// Summed density vector at angle t (atomless part).
    std::vector<double> density_at(double t) const;

    /// Measure of the full circle, per coordinate.
    std::vector<double> total() const;
    /// Total variation per coordinate, computed on the flattened partition.
    std::vector<double> total_variation() const;

    /// Canonical disjoint partition of the circle induced by all piece
    /// endpoints, with summed weights (zero-weight gaps included so the
    /// pieces tile the whole circle).
    std::vector<DensityPiece> flattened() const;

  private:
    int n_;
    std::vector<DensityPiece> pieces_;
    std::vector<MeasureAtom> atoms_;
};

/// Closed-form Herglotz transform
///   (1/2pi) int (zeta + lambda)/(zeta - lambda) dmu(zeta) + i * im_offset.
/// Each atom contributes (m/2pi)(zeta0 + lambda)/(zeta0 - lambda); each arc
/// piece contributes (w/2pi)[len - 2i (Log(1 - lambda e^{-i t1}) -
/// Log(1 - lambda e^{-i t0}))], which is the continuous branch of the log
/// antiderivative along the arc.  Requires |lambda| < 1.
std::vector<cplx> herglotz_transform(const CircleMeasure& mu, cplx lambda,
                                     const std::vector<double>& im_offset);

/// Complex derivative in lambda of the transform (offset drops out).
std::vector<cplx> herglotz_transform_deriv(const CircleMeasure& mu, cplx lambda);

struct HerglotzQuadrature {
    std::vector<cplx> value;
    bool converged = false;
    std::int64_t evals = 0;
};

/// Independent oracle for herglotz_transform: the density pieces are
/// integrated by adaptive trapezoidal quadrature (atoms stay closed-form).
/// converged = false signals budget exhaustion; the partial value is kept
/// for diagnostics.
HerglotzQuadrature herglotz_quadrature_oracle(const CircleMeasure& mu, cplx lambda,
                                              double tol = 1e-11,
                                              std::int64_t max_evals = 4'000'000);

/// int u dmu: weights times per-arc quadrature of u plus atom masses times
/// point values.  grid_resolution is the composite-Simpson panel count per
/// unit radian (at least 8 panels per arc).
std::vector<double> pair_with_test_function(const CircleMeasure& mu,
                                            const std::function<double(double)>& u,
                                            int grid_resolution = 256);

struct NegativityWitness {
    bool negative = true;
    bool atom = false;   // witness kind when negative == false
    Arc arc;             // offending arc (flattened) when !atom
    double angle = 0.0;  // offending atom angle when atom
    double value = 0.0;  // offending coordinate value
};

/// True iff coordinate `l` of mu is a negative measure: every flattened
/// density value <= 0 and every atom mass <= 0, up to 1e-12.
NegativityWitness is_negative(const CircleMeasure& mu, int coordinate);

/// The pushforward V . mu for a real m x n matrix V (row-major, m rows).
CircleMeasure measure_linear_map(const std::vector<std::vector<double>>& V,
                                 const CircleMeasure& mu);

/// Componentwise comparison on a common refinement: equal densities within
/// tol everywhere and matching atoms within tol in angle and mass.
bool measures_equal(const CircleMeasure& lhs, const CircleMeasure& rhs,
                    double tol = 1e-12);

}  // namespace tubegeo

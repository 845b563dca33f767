#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flier/common.hpp"

namespace flier::origami {

// Crease classes of the radial Miura tessellation. `Main` runs from the center
// O to the cell vertex M, `Boundary` from O to the inter-cell vertex B, `Sub`
// are the two chevron creases M-B of each cell, and `Tip` is the crease M-T
// between the two outer triangles.
enum class CreaseClass { Main = 0, Boundary = 1, Sub = 2, Tip = 3 };
inline constexpr int kNumCreaseClasses = 4;

const char* crease_class_name(CreaseClass c);

struct ClassParam {
    double rest_angle = 0.0;  // rad, signed: valley positive, mountain negative
    double stiffness = 1.0;   // N*m/rad per crease
};

struct OrigamiSpec {
    int n_cells = 4;
    double length = 0.030;      // main crease length L, m
    double tip_fraction = 0.3;  // tip radius = L * (1 + tip_fraction)
    std::array<ClassParam, kNumCreaseClasses> crease_classes{};
    // Mountain/valley sign per class (+1 valley, -1 mountain, 0 unfolded).
    std::array<int, kNumCreaseClasses> mv_assignment{};

    double alpha() const { return kPi / n_cells; }
    double tip_radius() const { return length * (1.0 + tip_fraction); }

    const ClassParam& param(CreaseClass c) const {
        return crease_classes[static_cast<int>(c)];
    }
    ClassParam& param(CreaseClass c) {
        return crease_classes[static_cast<int>(c)];
    }

    // Throws DomainError if any invariant is violated.
    void validate() const;
};

struct Vec2 {
    double x = 0, y = 0;
};

struct Crease {
    int v0 = 0, v1 = 0;
    CreaseClass cls = CreaseClass::Main;
    int mv_sign = 0;
};

struct FlatPattern {
    int n_cells = 0;
    std::vector<Vec2> vertices;          // [0]=O, then M_i, B_i, T_i blocks
    std::vector<Crease> creases;         // main, boundary, sub, tip blocks
    std::vector<std::array<int, 3>> faces;  // CCW triangles

    int vert_center() const { return 0; }
    int vert_m(int i) const { return 1 + i; }
    int vert_b(int i) const { return 1 + n_cells + i; }
    int vert_t(int i) const { return 1 + 2 * n_cells + i; }
};

struct FoldState {
    double psi = 0.0;                 // fold coordinate, rad
    std::vector<double> rho;          // per-crease fold angle, FlatPattern order
    std::vector<Vec3> positions;      // per-vertex, FlatPattern order
    double closure_residual = 0.0;    // max loop-closure violation
    // Reduced coordinates of the symmetric configuration (diagnostics).
    double beta = 0.0;  // elevation of the B vertices
    double chi = 0.0;   // elevation of the tip direction M->T
};

struct EnergyLandscape {
    std::vector<double> psi_grid;            // rad
    std::vector<double> energy;              // J; NaN marks a failed grid point
    std::vector<double> energy_normalized;   // E / kappa(main)
    double barrier_psi = 0.0;
    double barrier_energy = 0.0;             // J
    bool bistable = false;
    std::vector<std::pair<double, double>> minima;  // (psi, E)
};

// Fold angles (and d/dpsi) of one cell, by crease class.
struct ClassAngles {
    std::array<double, kNumCreaseClasses> rho{};
    std::array<double, kNumCreaseClasses> drho_dpsi{};
};

// Per-class crease multiplicity for an n-cell pattern.
inline int class_multiplicity(CreaseClass c, int n_cells) {
    return c == CreaseClass::Sub ? 2 * n_cells : n_cells;
}

// Flat crease length by class.
double class_length(const OrigamiSpec& spec, CreaseClass c);

FlatPattern build_leafout(const OrigamiSpec& spec);

// Largest |psi| the solver accepts before the driving construction degenerates.
double psi_limit(const OrigamiSpec& spec);

FoldState solve_fold_state(const FlatPattern& pattern, const OrigamiSpec& spec,
                           double psi);

// Symmetric per-class fold angles with analytic derivatives d(rho)/d(psi).
ClassAngles solve_class_angles(const OrigamiSpec& spec, double psi);

// E = 1/2 sum_j kappa_j (rho_j - rest_j)^2 over all creases.
double fold_energy(const FoldState& state, const OrigamiSpec& spec);
double fold_energy_normalized(const FoldState& state, const OrigamiSpec& spec);

// Energy of the symmetric configuration at psi, measured from the nearer of
// the two mirror-image rest crease-sets (the plastically formed crease pattern
// is mirror symmetric, so after snap-through the rest angles flip sign). This
// is what makes the landscape a double well with the barrier at psi = 0.
double landscape_energy(const OrigamiSpec& spec, double psi);
double landscape_energy_derivative(const OrigamiSpec& spec, double psi);

EnergyLandscape energy_landscape(const OrigamiSpec& spec,
                                 const std::vector<double>& psi_grid);

// Default grid: 161 uniform samples over [-80 deg, +80 deg].
std::vector<double> default_psi_grid();

// Peak center-point force needed to push the structure over the barrier,
// reduced by the payload gravity pre-load (clamped at zero).
double transition_force(const OrigamiSpec& spec, double payload_mass_kg = 0.0);

// Spec with uniform stiffness and rest angles from the solved state at
// rest_psi (default 55 deg); used for normalized-barrier studies.
OrigamiSpec make_uniform_spec(int n_cells, double kappa = 1.0,
                              double rest_psi = deg2rad(55.0),
                              double length = 0.030,
                              double tip_fraction = 0.3);

}  // namespace flier::origami

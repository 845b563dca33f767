#include "flier/origami.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flier::origami {

namespace {

using std::acos;
using std::atan2;
using std::cos;
using std::sin;
using std::sqrt;

constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonMaxIter = 200;
constexpr double kFoldAngleLimit = kPi - 1e-9;

// Templated 3-vector so the fold-angle extraction can run on Dual numbers.
template <typename T>
struct V3 {
    T x{}, y{}, z{};
};

template <typename T>
V3<T> sub3(const V3<T>& a, const V3<T>& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

template <typename T>
T dot3(const V3<T>& a, const V3<T>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T>
V3<T> cross3(const V3<T>& a, const V3<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

template <typename T>
V3<T> unit3(const V3<T>& a) {
    T n = sqrt(dot3(a, a));
    return {a.x / n, a.y / n, a.z / n};
}

// Signed dihedral fold angle at the crease between faces (a1,b1,c1) (left)
// and (a2,b2,c2) (right), both CCW in the flat state, about edge e.
template <typename T>
T dihedral(const V3<T>& n1, const V3<T>& n2, const V3<T>& e) {
    V3<T> eh = unit3(e);
    return atan2(dot3(cross3(n1, n2), eh), dot3(n1, n2));
}

template <typename T>
V3<T> face_normal(const V3<T>& a, const V3<T>& b, const V3<T>& c) {
    return unit3(cross3(sub3(b, a), sub3(c, a)));
}

struct Reduced {
    double beta = 0.0;
    double chi = 0.0;
    double residual = 0.0;
    double dbeta_dpsi = 0.0;
    double dchi_dpsi = 0.0;
};

struct Geom {
    double alpha, L, rt, rb, lt, d_bt2;  // d_bt2: flat |B- - T|^2
};

Geom geometry(const OrigamiSpec& spec) {
    Geom g;
    g.alpha = spec.alpha();
    g.L = spec.length;
    g.rt = spec.tip_radius();
    g.rb = g.rt * std::cos(g.alpha);
    g.lt = g.rt - g.L;
    double bx = g.rb * std::cos(g.alpha) - g.rt;
    double by = g.rb * std::sin(g.alpha);
    g.d_bt2 = bx * bx + by * by;
    return g;
}

// Residual of the |M-B| edge constraint (beta equation).
double r1_of(const Geom& g, double psi, double beta) {
    double ca = std::cos(g.alpha);
    return ca * std::cos(psi) * std::cos(beta) +
           std::sin(psi) * std::sin(beta) - ca;
}

// Residual of the |B- - T| edge constraint, normalized by L^2.
template <typename T>
T r2_of(const Geom& g, const T& psi, const T& beta, const T& chi) {
    double ca = std::cos(g.alpha), sa = std::sin(g.alpha);
    V3<T> m{g.L * cos(psi), T(0.0), g.L * sin(psi)};
    V3<T> t{m.x + g.lt * cos(chi), T(0.0), m.z + g.lt * sin(chi)};
    V3<T> bm{g.rb * cos(beta) * ca, T(-g.rb) * cos(beta) * sa,
             g.rb * sin(beta)};
    V3<T> d = sub3(bm, t);
    return (dot3(d, d) - g.d_bt2) / (g.L * g.L);
}

// Closed-form solution of the reduced constraints on the physical
// (non-conical) branch; used as the Newton starting point.
bool closed_form(const Geom& g, double psi, double& beta, double& chi) {
    double ca = std::cos(g.alpha);
    double r = std::hypot(ca * std::cos(psi), std::sin(psi));
    double c1 = ca / r;
    if (c1 > 1.0) return false;
    double phi0 = std::atan2(std::sin(psi), ca * std::cos(psi));
    beta = phi0 - std::acos(std::min(1.0, c1));

    double sa = std::sin(g.alpha);
    double mx = g.L * std::cos(psi), mz = g.L * std::sin(psi);
    double bx = g.rb * std::cos(beta) * ca, by = -g.rb * std::cos(beta) * sa,
           bz = g.rb * std::sin(beta);
    double vx = bx - mx, vy = by, vz = bz - mz;
    double v2 = vx * vx + vy * vy + vz * vz;
    double c = (v2 + g.lt * g.lt - g.d_bt2) / (2.0 * g.lt);
    double rv = std::hypot(vx, vz);
    if (std::abs(c) > rv) return false;
    chi = wrap_angle(std::atan2(vz, vx) - std::acos(c / rv));
    return true;
}

// Damped Newton on (beta, chi) for psi >= 0, with analytic Jacobian.
Reduced solve_reduced_abs(const Geom& g, double psi) {
    Reduced out;
    if (psi == 0.0) return out;

    double beta = 0.0, chi = 0.0;
    if (!closed_form(g, psi, beta, chi)) {
        // fall back to a linearized guess near flat
        double ca = std::cos(g.alpha), sa = std::sin(g.alpha);
        beta = psi * (1.0 - sa) / ca;
        chi = psi;
    }

    double ca = std::cos(g.alpha);
    auto resid = [&](double b, double x, double& r1, double& r2) {
        r1 = r1_of(g, psi, b);
        r2 = r2_of<double>(g, psi, b, x);
    };

    double r1, r2;
    resid(beta, chi, r1, r2);
    double err = std::max(std::abs(r1), std::abs(r2));
    int iter = 0;
    while (err > kNewtonTol && iter < kNewtonMaxIter) {
        // Jacobian: r1 depends on beta only; r2 on beta and chi.
        double j11 = -ca * std::cos(psi) * std::sin(beta) +
                     std::sin(psi) * std::cos(beta);
        Dual r2b = r2_of<Dual>(g, Dual(psi), Dual(beta, 1.0), Dual(chi));
        Dual r2x = r2_of<Dual>(g, Dual(psi), Dual(beta), Dual(chi, 1.0));
        double j21 = r2b.d, j22 = r2x.d;
        double det = j11 * j22;
        if (det == 0.0) throw SolverError("singular reduced Jacobian", err);
        double db = -r1 / j11;
        double dx = -(r2 + j21 * db) / j22;

        double step = 1.0;
        for (; step > 1.0 / 1024.0; step *= 0.5) {
            double nb = beta + step * db, nx = chi + step * dx;
            double n1, n2;
            resid(nb, nx, n1, n2);
            double nerr = std::max(std::abs(n1), std::abs(n2));
            if (nerr < err) {
                beta = nb;
                chi = nx;
                r1 = n1;
                r2 = n2;
                err = nerr;
                break;
            }
        }
        if (step <= 1.0 / 1024.0) break;  // stalled
        ++iter;
    }
    if (err > kNewtonTol)
        throw SolverError("reduced fold solver did not converge", err);

    out.beta = beta;
    out.chi = chi;
    out.residual = err;

    // Implicit differentiation for d(beta)/d(psi), d(chi)/d(psi).
    double dr1_dpsi = -ca * std::sin(psi) * std::cos(beta) +
                      std::cos(psi) * std::sin(beta);
    double dr1_dbeta = -ca * std::cos(psi) * std::sin(beta) +
                       std::sin(psi) * std::cos(beta);
    out.dbeta_dpsi = -dr1_dpsi / dr1_dbeta;
    Dual r2p = r2_of<Dual>(g, Dual(psi, 1.0), Dual(beta), Dual(chi));
    Dual r2b = r2_of<Dual>(g, Dual(psi), Dual(beta, 1.0), Dual(chi));
    Dual r2x = r2_of<Dual>(g, Dual(psi), Dual(beta), Dual(chi, 1.0));
    out.dchi_dpsi = -(r2p.d + r2b.d * out.dbeta_dpsi) / r2x.d;
    return out;
}

Reduced solve_reduced(const Geom& g, double psi) {
    double s = psi < 0 ? -1.0 : 1.0;
    Reduced r = solve_reduced_abs(g, std::abs(psi));
    r.beta *= s;
    r.chi *= s;
    // d/dpsi of an odd function is even: derivatives keep their sign.
    return r;
}

// Fold angles of cell 0, templated so the same code yields derivatives.
template <typename T>
std::array<T, kNumCreaseClasses> cell_angles(const Geom& g, const T& psi,
                                             const T& beta, const T& chi) {
    double ca = std::cos(g.alpha), sa = std::sin(g.alpha);
    double c2a = std::cos(2.0 * g.alpha), s2a = std::sin(2.0 * g.alpha);

    V3<T> O{T(0.0), T(0.0), T(0.0)};
    V3<T> M{g.L * cos(psi), T(0.0), g.L * sin(psi)};
    V3<T> Tt{M.x + g.lt * cos(chi), T(0.0), M.z + g.lt * sin(chi)};
    V3<T> Bp{g.rb * cos(beta) * ca, g.rb * cos(beta) * sa, g.rb * sin(beta)};
    V3<T> Bm{Bp.x, T(0.0) - Bp.y, Bp.z};
    V3<T> M1{c2a * M.x, s2a * M.x, M.z};  // M rotated by 2*alpha about z

    V3<T> f_obm_m = face_normal(O, Bm, M);
    V3<T> f_om_bp = face_normal(O, M, Bp);
    V3<T> f_mt_bp = face_normal(M, Tt, Bp);
    V3<T> f_mbm_t = face_normal(M, Bm, Tt);
    V3<T> f_obp_m1 = face_normal(O, Bp, M1);

    std::array<T, kNumCreaseClasses> out;
    out[static_cast<int>(CreaseClass::Main)] =
        dihedral(f_obm_m, f_om_bp, sub3(M, O));
    out[static_cast<int>(CreaseClass::Boundary)] =
        dihedral(f_om_bp, f_obp_m1, sub3(Bp, O));
    out[static_cast<int>(CreaseClass::Sub)] =
        dihedral(f_om_bp, f_mt_bp, sub3(Bp, M));
    out[static_cast<int>(CreaseClass::Tip)] =
        dihedral(f_mbm_t, f_mt_bp, sub3(Tt, M));
    return out;
}

}  // namespace

const char* crease_class_name(CreaseClass c) {
    switch (c) {
        case CreaseClass::Main: return "main";
        case CreaseClass::Boundary: return "boundary";
        case CreaseClass::Sub: return "sub";
        case CreaseClass::Tip: return "tip";
    }
    return "?";
}

void OrigamiSpec::validate() const {
    if (n_cells < 3 || n_cells > 8)
        throw DomainError("n_cells must be in [3, 8], got " +
                          std::to_string(n_cells));
    if (!(length > 0)) throw DomainError("main crease length must be positive");
    if (!(tip_fraction > 0)) throw DomainError("tip_fraction must be positive");
    for (int c = 0; c < kNumCreaseClasses; ++c) {
        const auto& p = crease_classes[c];
        if (!(p.stiffness > 0))
            throw DomainError(std::string("stiffness must be positive for ") +
                              crease_class_name(static_cast<CreaseClass>(c)));
        double r = p.rest_angle;
        int mv = mv_assignment[c];
        int want = r > 0 ? 1 : (r < 0 ? -1 : 0);
        if (want != mv)
            throw DomainError(
                std::string("mountain/valley sign mismatch on class ") +
                crease_class_name(static_cast<CreaseClass>(c)));
    }
}

double class_length(const OrigamiSpec& spec, CreaseClass c) {
    Geom g = geometry(spec);
    switch (c) {
        case CreaseClass::Main: return g.L;
        case CreaseClass::Boundary: return g.rb;
        case CreaseClass::Sub: {
            double bx = g.rb * std::cos(g.alpha) - g.L;
            double by = g.rb * std::sin(g.alpha);
            return std::hypot(bx, by);
        }
        case CreaseClass::Tip: return g.lt;
    }
    return 0.0;
}

FlatPattern build_leafout(const OrigamiSpec& spec) {
    spec.validate();
    Geom g = geometry(spec);
    int n = spec.n_cells;

    FlatPattern p;
    p.n_cells = n;
    p.vertices.resize(1 + 3 * n);
    p.vertices[0] = {0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        double am = 2.0 * g.alpha * i;       // main azimuth
        double ab = am + g.alpha;            // boundary azimuth
        p.vertices[p.vert_m(i)] = {g.L * std::cos(am), g.L * std::sin(am)};
        p.vertices[p.vert_b(i)] = {g.rb * std::cos(ab), g.rb * std::sin(ab)};
        p.vertices[p.vert_t(i)] = {g.rt * std::cos(am), g.rt * std::sin(am)};
    }

    auto mv = [&](CreaseClass c) { return spec.mv_assignment[static_cast<int>(c)]; };
    for (int i = 0; i < n; ++i)
        p.creases.push_back({0, p.vert_m(i), CreaseClass::Main, mv(CreaseClass::Main)});
    for (int i = 0; i < n; ++i)
        p.creases.push_back({0, p.vert_b(i), CreaseClass::Boundary, mv(CreaseClass::Boundary)});
    for (int i = 0; i < n; ++i) {
        int prev = (i + n - 1) % n;
        p.creases.push_back({p.vert_m(i), p.vert_b(i), CreaseClass::Sub, mv(CreaseClass::Sub)});
        p.creases.push_back({p.vert_m(i), p.vert_b(prev), CreaseClass::Sub, mv(CreaseClass::Sub)});
    }
    for (int i = 0; i < n; ++i)
        p.creases.push_back({p.vert_m(i), p.vert_t(i), CreaseClass::Tip, mv(CreaseClass::Tip)});

    for (int i = 0; i < n; ++i) {
        int prev = (i + n - 1) % n;
        p.faces.push_back({0, p.vert_b(prev), p.vert_m(i)});
        p.faces.push_back({0, p.vert_m(i), p.vert_b(i)});
        p.faces.push_back({p.vert_m(i), p.vert_t(i), p.vert_b(i)});
        p.faces.push_back({p.vert_m(i), p.vert_b(prev), p.vert_t(i)});
    }
    return p;
}

double psi_limit(const OrigamiSpec&) { return deg2rad(89.5); }

ClassAngles solve_class_angles(const OrigamiSpec& spec, double psi) {
    Geom g = geometry(spec);
    ClassAngles out;
    if (psi == 0.0) {
        // Flat configuration: fold angles zero; slopes from a one-sided limit.
        double eps = 1e-6;
        Reduced r = solve_reduced(g, eps);
        auto a = cell_angles<double>(g, eps, r.beta, r.chi);
        for (int c = 0; c < kNumCreaseClasses; ++c) {
            out.rho[c] = 0.0;
            out.drho_dpsi[c] = a[c] / eps;
        }
        return out;
    }
    Reduced r = solve_reduced(g, psi);
    auto vals = cell_angles<Dual>(g, Dual(psi, 1.0), Dual(r.beta, r.dbeta_dpsi),
                                  Dual(r.chi, r.dchi_dpsi));
    for (int c = 0; c < kNumCreaseClasses; ++c) {
        out.rho[c] = vals[c].v;
        out.drho_dpsi[c] = vals[c].d;
    }
    return out;
}

FoldState solve_fold_state(const FlatPattern& pattern, const OrigamiSpec& spec,
                           double psi) {
    spec.validate();
    if (std::abs(psi) >= psi_limit(spec))
        throw DomainError("psi beyond kinematic limit");
    Geom g = geometry(spec);
    int n = spec.n_cells;

    FoldState st;
    st.psi = psi;
    Reduced r = solve_reduced(g, psi);
    st.beta = r.beta;
    st.chi = r.chi;

    st.positions.resize(pattern.vertices.size());
    st.positions[0] = {0, 0, 0};
    double mx = g.L * std::cos(psi), mz = g.L * std::sin(psi);
    double tx = mx + g.lt * std::cos(r.chi), tz = mz + g.lt * std::sin(r.chi);
    double bx = g.rb * std::cos(r.beta), bz = g.rb * std::sin(r.beta);
    for (int i = 0; i < n; ++i) {
        double am = 2.0 * g.alpha * i, ab = am + g.alpha;
        st.positions[pattern.vert_m(i)] = {mx * std::cos(am), mx * std::sin(am), mz};
        st.positions[pattern.vert_t(i)] = {tx * std::cos(am), tx * std::sin(am), tz};
        st.positions[pattern.vert_b(i)] = {bx * std::cos(ab), bx * std::sin(ab), bz};
    }

    ClassAngles ca = solve_class_angles(spec, psi);
    for (double v : ca.rho)
        if (std::abs(v) >= kFoldAngleLimit)
            throw DomainError("psi at face-collision limit");
    st.rho.resize(pattern.creases.size());
    for (std::size_t j = 0; j < pattern.creases.size(); ++j)
        st.rho[j] = ca.rho[static_cast<int>(pattern.creases[j].cls)];

    // Constraint violation: solver residual plus worst edge-length error.
    double edge_err = 0.0;
    for (const auto& cr : pattern.creases) {
        const Vec2& a0 = pattern.vertices[cr.v0];
        const Vec2& b0 = pattern.vertices[cr.v1];
        double l0 = std::hypot(a0.x - b0.x, a0.y - b0.y);
        double l1 = (st.positions[cr.v0] - st.positions[cr.v1]).norm();
        edge_err = std::max(edge_err, std::abs(l1 - l0) / l0);
    }
    for (const auto& f : pattern.faces) {
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            const Vec2& a0 = pattern.vertices[a];
            const Vec2& b0 = pattern.vertices[b];
            double l0 = std::hypot(a0.x - b0.x, a0.y - b0.y);
            double l1 = (st.positions[a] - st.positions[b]).norm();
            edge_err = std::max(edge_err, std::abs(l1 - l0) / l0);
        }
    }
    st.closure_residual = std::max(r.residual, edge_err);
    return st;
}

double fold_energy(const FoldState& state, const OrigamiSpec& spec) {
    // The per-crease sum reduces to class values times multiplicities, but is
    // evaluated crease by crease to stay valid for any rho vector.
    double e = 0.0;
    FlatPattern pat = build_leafout(spec);
    for (std::size_t j = 0; j < state.rho.size() && j < pat.creases.size(); ++j) {
        const ClassParam& p = spec.param(pat.creases[j].cls);
        double d = state.rho[j] - p.rest_angle;
        e += 0.5 * p.stiffness * d * d;
    }
    return e;
}

double fold_energy_normalized(const FoldState& state, const OrigamiSpec& spec) {
    return fold_energy(state, spec) / spec.param(CreaseClass::Main).stiffness;
}

namespace {

// Energies against the rest crease-set and its mirror image.
void two_sided_energy(const OrigamiSpec& spec, const ClassAngles& a,
                      double& e_plus, double& e_minus) {
    e_plus = e_minus = 0.0;
    for (int c = 0; c < kNumCreaseClasses; ++c) {
        const ClassParam& p = spec.crease_classes[c];
        double m = class_multiplicity(static_cast<CreaseClass>(c), spec.n_cells);
        double dp = a.rho[c] - p.rest_angle;
        double dm = a.rho[c] + p.rest_angle;
        e_plus += 0.5 * m * p.stiffness * dp * dp;
        e_minus += 0.5 * m * p.stiffness * dm * dm;
    }
}

}  // namespace

double landscape_energy(const OrigamiSpec& spec, double psi) {
    ClassAngles a = solve_class_angles(spec, psi);
    double ep, em;
    two_sided_energy(spec, a, ep, em);
    return std::min(ep, em);
}

double landscape_energy_derivative(const OrigamiSpec& spec, double psi) {
    ClassAngles a = solve_class_angles(spec, psi);
    double ep, em;
    two_sided_energy(spec, a, ep, em);
    double sign = ep <= em ? 1.0 : -1.0;  // which rest crease-set is nearer
    double de = 0.0;
    for (int c = 0; c < kNumCreaseClasses; ++c) {
        const ClassParam& p = spec.crease_classes[c];
        double m = class_multiplicity(static_cast<CreaseClass>(c), spec.n_cells);
        de += m * p.stiffness * (a.rho[c] - sign * p.rest_angle) *
              a.drho_dpsi[c];
    }
    return de;
}

std::vector<double> default_psi_grid() {
    std::vector<double> g;
    g.reserve(161);
    for (int i = 0; i < 161; ++i)
        g.push_back(deg2rad(-80.0 + 160.0 * i / 160.0));
    return g;
}

EnergyLandscape energy_landscape(const OrigamiSpec& spec,
                                 const std::vector<double>& psi_grid) {
    spec.validate();
    EnergyLandscape out;
    out.psi_grid = psi_grid;
    double nan = std::numeric_limits<double>::quiet_NaN();
    double kappa_main = spec.param(CreaseClass::Main).stiffness;
    for (double psi : psi_grid) {
        double e;
        try {
            e = landscape_energy(spec, psi);
        } catch (const SolverError&) {
            e = nan;  // recorded as a gap
        } catch (const DomainError&) {
            e = nan;
        }
        out.energy.push_back(e);
        out.energy_normalized.push_back(e / kappa_main);
    }

    // Local minima/maxima over interior points with valid neighbors.
    std::vector<std::size_t> min_idx, max_idx;
    for (std::size_t i = 1; i + 1 < out.energy.size(); ++i) {
        double a = out.energy[i - 1], b = out.energy[i], c = out.energy[i + 1];
        if (std::isnan(a) || std::isnan(b) || std::isnan(c)) continue;
        if (b < a && b <= c) min_idx.push_back(i);
        if (b > a && b >= c) max_idx.push_back(i);
    }
    for (auto i : min_idx)
        out.minima.emplace_back(out.psi_grid[i], out.energy[i]);
    out.bistable = min_idx.size() == 2;
    if (out.bistable) {
        std::size_t lo = min_idx[0], hi = min_idx[1];
        std::size_t best = lo;
        double bm = -std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i <= hi; ++i) {
            if (!std::isnan(out.energy[i]) && out.energy[i] > bm) {
                bm = out.energy[i];
                best = i;
            }
        }
        out.barrier_psi = out.psi_grid[best];
        out.barrier_energy = bm;
    } else if (!min_idx.empty()) {
        out.barrier_psi = out.psi_grid[min_idx[0]];
        out.barrier_energy = out.energy[min_idx[0]];
    }
    return out;
}

double transition_force(const OrigamiSpec& spec, double payload_mass_kg) {
    spec.validate();
    EnergyLandscape l = energy_landscape(spec, default_psi_grid());
    if (!l.bistable) throw DomainError("transition_force requires a bistable spec");
    // Positive-side minimum is the start state of the push-through test.
    double psi0 = std::max(l.minima[0].first, l.minima[1].first);
    if (psi0 <= 0) psi0 = std::abs(l.minima[0].first);

    // F(psi) = |dE/dpsi| / (L cos psi): center-point height z = L sin psi.
    const int kSamples = 2000;
    double psi_eps = 1e-4;
    double peak = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
        double psi = psi_eps + (psi0 - psi_eps) * i / kSamples;
        double de = landscape_energy_derivative(spec, psi);
        double f = std::abs(de) / (spec.length * std::cos(psi));
        peak = std::max(peak, f);
    }
    return std::max(0.0, peak - payload_mass_kg * kGravity);
}

OrigamiSpec make_uniform_spec(int n_cells, double kappa, double rest_psi,
                              double length, double tip_fraction) {
    OrigamiSpec spec;
    spec.n_cells = n_cells;
    spec.length = length;
    spec.tip_fraction = tip_fraction;
    for (auto& p : spec.crease_classes) p.stiffness = kappa;
    ClassAngles a = solve_class_angles(spec, rest_psi);
    for (int c = 0; c < kNumCreaseClasses; ++c) {
        spec.crease_classes[c].rest_angle = a.rho[c];
        spec.mv_assignment[c] = a.rho[c] > 0 ? 1 : (a.rho[c] < 0 ? -1 : 0);
    }
    return spec;
}

}  // namespace flier::origami

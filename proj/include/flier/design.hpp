#pragma once

#include <array>
#include <string>
#include <vector>

#include "flier/origami.hpp"

namespace flier::design {

struct FilmSpec {
    double thickness = 12.5e-6;       // m
    double youngs_modulus = 2.5e9;    // Pa (polyimide scale; informational)
    std::string name = "polyimide-12.5um";

    void validate() const;
};

struct CutPattern {
    // Fraction of each crease length removed as holes, by crease class.
    std::array<double, origami::kNumCreaseClasses> cut_fraction{
        0.26, 0.0, 0.26, 0.26};  // main, boundary, sub, tip
    double hole_pitch = 1.0e-3;  // m
    double hole_width = 0.1e-3;  // m

    double fraction(origami::CreaseClass c) const {
        return cut_fraction[static_cast<int>(c)];
    }
    void validate() const;
};

struct RootStructure {
    bool enabled = false;
    double stiffness_multiplier = 5.2;

    void validate() const;
};

// Global hinge-stiffness calibration constant in
// kappa = k0 * thickness^3 * crease_length * (1 - cut_fraction).
inline constexpr double kStiffnessScaleDefault = 1.1762e11;

double crease_stiffness(const FilmSpec& film, const CutPattern& cut,
                        double crease_length, origami::CreaseClass cls,
                        double k0 = kStiffnessScaleDefault);

// Origami spec with per-class stiffness derived from film/cut (and the root
// multiplier applied uniformly when enabled); rest angles from the solved
// state at rest_psi.
origami::OrigamiSpec make_origami_spec(
    int n_cells, const FilmSpec& film, const CutPattern& cut,
    const RootStructure& root = {}, double rest_psi = deg2rad(55.0),
    double length = 0.030, double tip_fraction = 0.3,
    double k0 = kStiffnessScaleDefault);

struct ForceRow {
    std::string film;
    double thickness = 0.0;      // m
    double cut_main = 0.0;       // cut fraction applied to main/sub/tip
    bool root = false;
    double force_n = 0.0;        // transition force, N
    bool ok = true;              // false when the spec came out monostable
    std::string error;
};

std::vector<ForceRow> force_table(const std::vector<FilmSpec>& films,
                                  const std::vector<CutPattern>& cuts,
                                  int n_cells,
                                  bool include_root_variant = true,
                                  double k0 = kStiffnessScaleDefault);

// --- cut-pattern vector export -------------------------------------------

struct Segment {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // mm
};

// Geometry of an exported cut drawing: closed outer boundary plus hole
// segments (laser cuts) and score-only crease annotations.
struct CutDrawing {
    std::vector<std::pair<double, double>> boundary;  // closed polygon, mm
    std::vector<Segment> holes;                       // layer "cut-crease"
    std::vector<Segment> score;                       // layer "score"
};

CutDrawing layout_cut_pattern(const origami::FlatPattern& pattern,
                              const CutPattern& cut);

// Serialize a drawing as SVG 1.1 (mm units, byte-stable formatting).
// `meta` becomes the leading comment line.
std::string render_svg(const CutDrawing& drawing, const std::string& meta);

std::string export_cut_pattern(const origami::FlatPattern& pattern,
                               const CutPattern& cut,
                               const std::string& meta = "");

// Parse geometry back out of an SVG produced by render_svg (round-trip
// support for the export-idempotence property).
CutDrawing parse_svg(const std::string& svg);

}  // namespace flier::design

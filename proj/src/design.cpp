#include "flier/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace flier::design {

using origami::CreaseClass;
using origami::kNumCreaseClasses;

void FilmSpec::validate() const {
    if (!(thickness > 0)) throw DomainError("film thickness must be positive");
    if (!(youngs_modulus > 0)) throw DomainError("film modulus must be positive");
}

void CutPattern::validate() const {
    for (double f : cut_fraction)
        if (f < 0 || f >= 1.0)
            throw DomainError("cut_fraction must be in [0, 1)");
    if (!(hole_pitch > 0) || !(hole_width > 0))
        throw DomainError("hole geometry must be positive");
}

void RootStructure::validate() const {
    if (stiffness_multiplier < 1.0)
        throw DomainError("root stiffness multiplier must be >= 1");
}

double crease_stiffness(const FilmSpec& film, const CutPattern& cut,
                        double crease_length, CreaseClass cls, double k0) {
    film.validate();
    cut.validate();
    if (!(crease_length > 0)) throw DomainError("crease length must be positive");
    double t = film.thickness;
    return k0 * t * t * t * crease_length * (1.0 - cut.fraction(cls));
}

origami::OrigamiSpec make_origami_spec(int n_cells, const FilmSpec& film,
                                       const CutPattern& cut,
                                       const RootStructure& root,
                                       double rest_psi, double length,
                                       double tip_fraction, double k0) {
    root.validate();
    origami::OrigamiSpec spec;
    spec.n_cells = n_cells;
    spec.length = length;
    spec.tip_fraction = tip_fraction;
    double mult = root.enabled ? root.stiffness_multiplier : 1.0;
    for (int c = 0; c < kNumCreaseClasses; ++c) {
        auto cls = static_cast<CreaseClass>(c);
        spec.crease_classes[c].stiffness =
            mult * crease_stiffness(film, cut, origami::class_length(spec, cls),
                                    cls, k0);
    }
    origami::ClassAngles a = origami::solve_class_angles(spec, rest_psi);
    for (int c = 0; c < kNumCreaseClasses; ++c) {
        spec.crease_classes[c].rest_angle = a.rho[c];
        spec.mv_assignment[c] = a.rho[c] > 0 ? 1 : (a.rho[c] < 0 ? -1 : 0);
    }
    return spec;
}

std::vector<ForceRow> force_table(const std::vector<FilmSpec>& films,
                                  const std::vector<CutPattern>& cuts,
                                  int n_cells, bool include_root_variant,
                                  double k0) {
    std::vector<ForceRow> rows;
    for (const auto& film : films) {
        for (const auto& cut : cuts) {
            for (int r = 0; r < (include_root_variant ? 2 : 1); ++r) {
                RootStructure root;
                root.enabled = r == 1;
                ForceRow row;
                row.film = film.name;
                row.thickness = film.thickness;
                row.cut_main = cut.fraction(CreaseClass::Main);
                row.root = root.enabled;
                try {
                    auto spec = make_origami_spec(n_cells, film, cut, root,
                                                  deg2rad(55.0), 0.030, 0.3, k0);
                    row.force_n = origami::transition_force(spec);
                } catch (const DomainError& e) {
                    row.ok = false;
                    row.error = e.what();
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

namespace {

// Fixed-format millimeter coordinate: 6 decimals, no negative zero.
std::string fmt_mm(double v) {
    if (std::abs(v) < 5e-7) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void emit_holes(const origami::Vec2& a, const origami::Vec2& b, double frac,
                double pitch_m, std::vector<Segment>& out) {
    double len = std::hypot(b.x - a.x, b.y - a.y);
    double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
    int n_cells = std::max(1, static_cast<int>(std::floor(len / pitch_m)));
    double cell = len / n_cells;
    double hole = frac * cell;
    for (int k = 0; k < n_cells; ++k) {
        double mid = (k + 0.5) * cell;
        double s0 = mid - hole / 2.0, s1 = mid + hole / 2.0;
        out.push_back({(a.x + ux * s0) * 1e3, (a.y + uy * s0) * 1e3,
                       (a.x + ux * s1) * 1e3, (a.y + uy * s1) * 1e3});
    }
}

}  // namespace

CutDrawing layout_cut_pattern(const origami::FlatPattern& pattern,
                              const CutPattern& cut) {
    cut.validate();
    CutDrawing d;
    int n = pattern.n_cells;
    // Outer boundary alternates tip and inter-cell vertices: T0 B0 T1 B1 ...
    for (int i = 0; i < n; ++i) {
        const auto& t = pattern.vertices[pattern.vert_t(i)];
        const auto& b = pattern.vertices[pattern.vert_b(i)];
        d.boundary.emplace_back(t.x * 1e3, t.y * 1e3);
        d.boundary.emplace_back(b.x * 1e3, b.y * 1e3);
    }

    for (const auto& cr : pattern.creases) {
        const auto& a = pattern.vertices[cr.v0];
        const auto& b = pattern.vertices[cr.v1];
        double frac = cut.fraction(cr.cls);
        double len = std::hypot(b.x - a.x, b.y - a.y);
        if (frac > 0 && frac * len < cut.hole_width)
            throw DomainError("hole geometry exceeds crease length");
        if (frac > 0) {
            emit_holes(a, b, frac, cut.hole_pitch, d.holes);
        } else {
            d.score.push_back({a.x * 1e3, a.y * 1e3, b.x * 1e3, b.y * 1e3});
        }
    }
    return d;
}

std::string render_svg(const CutDrawing& d, const std::string& meta) {
    double minx = 0, miny = 0, maxx = 0, maxy = 0;
    auto grow = [&](double x, double y) {
        minx = std::min(minx, x);
        miny = std::min(miny, y);
        maxx = std::max(maxx, x);
        maxy = std::max(maxy, y);
    };
    for (const auto& [x, y] : d.boundary) grow(x, y);
    double margin = 2.0;
    minx -= margin; miny -= margin; maxx += margin; maxy += margin;

    std::ostringstream s;
    s << "<!-- " << meta << " -->\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fmt_mm(maxx - minx) << "mm\" height=\"" << fmt_mm(maxy - miny)
      << "mm\" viewBox=\"" << fmt_mm(minx) << " " << fmt_mm(miny) << " "
      << fmt_mm(maxx - minx) << " " << fmt_mm(maxy - miny) << "\">\n";

    s << "<g id=\"cut-boundary\" fill=\"none\" stroke=\"black\" stroke-width=\"0.05\">\n";
    s << "<polygon points=\"";
    for (std::size_t i = 0; i < d.boundary.size(); ++i) {
        if (i) s << " ";
        s << fmt_mm(d.boundary[i].first) << "," << fmt_mm(d.boundary[i].second);
    }
    s << "\"/>\n</g>\n";

    s << "<g id=\"cut-crease\" fill=\"none\" stroke=\"black\" stroke-width=\"0.05\">\n";
    for (const auto& h : d.holes)
        s << "<line x1=\"" << fmt_mm(h.x0) << "\" y1=\"" << fmt_mm(h.y0)
          << "\" x2=\"" << fmt_mm(h.x1) << "\" y2=\"" << fmt_mm(h.y1)
          << "\"/>\n";
    s << "</g>\n";

    s << "<g id=\"score\" fill=\"none\" stroke=\"blue\" stroke-width=\"0.02\">\n";
    for (const auto& h : d.score)
        s << "<line x1=\"" << fmt_mm(h.x0) << "\" y1=\"" << fmt_mm(h.y0)
          << "\" x2=\"" << fmt_mm(h.x1) << "\" y2=\"" << fmt_mm(h.y1)
          << "\"/>\n";
    s << "</g>\n</svg>\n";
    return s.str();
}

std::string export_cut_pattern(const origami::FlatPattern& pattern,
                               const CutPattern& cut, const std::string& meta) {
    return render_svg(layout_cut_pattern(pattern, cut), meta);
}

namespace {

double parse_attr(const std::string& tag, const std::string& name) {
    auto pos = tag.find(name + "=\"");
    if (pos == std::string::npos)
        throw DomainError("missing SVG attribute " + name);
    pos += name.size() + 2;
    return std::strtod(tag.c_str() + pos, nullptr);
}

}  // namespace

CutDrawing parse_svg(const std::string& svg) {
    CutDrawing d;
    std::istringstream in(svg);
    std::string line;
    std::string layer;
    while (std::getline(in, line)) {
        if (line.rfind("<g id=\"", 0) == 0) {
            auto end = line.find('"', 7);
            layer = line.substr(7, end - 7);
        } else if (line.rfind("<polygon points=\"", 0) == 0) {
            auto start = line.find('"') + 1;
            auto end = line.find('"', start);
            std::istringstream pts(line.substr(start, end - start));
            std::string pair;
            while (pts >> pair) {
                auto comma = pair.find(',');
                d.boundary.emplace_back(std::strtod(pair.c_str(), nullptr),
                                        std::strtod(pair.c_str() + comma + 1,
                                                    nullptr));
            }
        } else if (line.rfind("<line ", 0) == 0) {
            Segment seg{parse_attr(line, "x1"), parse_attr(line, "y1"),
                        parse_attr(line, "x2"), parse_attr(line, "y2")};
            if (layer == "cut-crease")
                d.holes.push_back(seg);
            else
                d.score.push_back(seg);
        }
    }
    return d;
}

}  // namespace flier::design

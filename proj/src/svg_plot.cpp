#include "hhsmc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hhsmc {

namespace {

constexpr int kWidth = 660;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70, kMarginRight = 20, kMarginTop = 40, kMarginBottom = 50;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

struct Range {
    double lo = 0.0, hi = 1.0;

    void include(double x) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    void pad() {
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
    [[nodiscard]] double frac(double x) const { return (x - lo) / (hi - lo); }
};

Range range_of(const std::vector<double>& v) {
    Range r{v.front(), v.front()};
    for (double x : v) r.include(x);
    return r;
}

void open_svg(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

void draw_axes(std::ostringstream& os, const Range& xr, const Range& yr,
               const std::string& x_label, const std::string& y_label) {
    const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
       << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = k / 4.0;
        const double px = x0 + fx * (x1 - x0);
        const double py = y0 - fx * (y0 - y1);
        os << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 4
           << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << px << "\" y=\"" << y0 + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << num(xr.lo + fx * (xr.hi - xr.lo)) << "</text>\n"
           << "<line x1=\"" << x0 - 4 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py
           << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << num(yr.lo + fx * (yr.hi - yr.lo)) << "</text>\n";
    }
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
       << "</text>\n"
       << "<text x=\"16\" y=\"" << (y0 + y1) / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       << "transform=\"rotate(-90 16 " << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";
}

void save(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// diverging blue -> white -> red
std::string heat_color(double f) {
    f = std::clamp(f, 0.0, 1.0);
    auto mix = [](int a, int b, double t) { return static_cast<int>(a + (b - a) * t); };
    int r, g, b;
    if (f < 0.5) {
        const double t = f / 0.5;
        r = mix(0x21, 0xf7, t);
        g = mix(0x66, 0xf7, t);
        b = mix(0xac, 0xf7, t);
    } else {
        const double t = (f - 0.5) / 0.5;
        r = mix(0xf7, 0xb2, t);
        g = mix(0xf7, 0x18, t);
        b = mix(0xf7, 0x2b, t);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series) {
    if (series.empty()) throw std::invalid_argument("write_line_chart_svg: no series");
    for (const auto& s : series) {
        if (s.x == nullptr || s.y == nullptr || s.x->empty() || s.x->size() != s.y->size()) {
            throw std::invalid_argument("write_line_chart_svg: empty or mismatched series");
        }
    }
    Range xr = range_of(*series.front().x);
    Range yr = range_of(*series.front().y);
    for (const auto& s : series) {
        for (double x : *s.x) xr.include(x);
        for (double y : *s.y) yr.include(y);
    }
    xr.pad();
    yr.pad();

    std::ostringstream os;
    open_svg(os, title);
    draw_axes(os, xr, yr, x_label, y_label);
    const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\" points=\"";
        for (size_t i = 0; i < s.x->size(); ++i) {
            const double px = x0 + xr.frac((*s.x)[i]) * (x1 - x0);
            const double py = y0 - yr.frac((*s.y)[i]) * (y0 - y1);
            os << px << ',' << py << ' ';
        }
        os << "\"/>\n";
    }
    if (series.size() > 1) {
        int ly = kMarginTop + 8;
        for (const auto& s : series) {
            os << "<line x1=\"" << x1 - 90 << "\" y1=\"" << ly << "\" x2=\"" << x1 - 70
               << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
               << "<text x=\"" << x1 - 64 << "\" y=\"" << ly + 4
               << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
            ly += 16;
        }
    }
    os << "</svg>\n";
    save(path, os.str());
}

void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       const Mesh& mesh, const StateField& field) {
    if (field.rows() == 0 || field.cols() == 0) {
        throw std::invalid_argument("write_heatmap_svg: empty field");
    }
    Range vr{field.at(0, 0), field.at(0, 0)};
    for (int i = 0; i < field.rows(); ++i) {
        for (int j = 0; j < field.cols(); ++j) vr.include(field.at(i, j));
    }
    if (vr.hi - vr.lo < 1e-12) vr.pad();

    std::ostringstream os;
    open_svg(os, title);
    Range xr{mesh.tmesh.front(), mesh.tmesh.back()};
    Range yr{mesh.xmesh.front(), mesh.xmesh.back()};
    draw_axes(os, xr, yr, "t [ms]", "x [cm]");
    const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    const double cw = static_cast<double>(x1 - x0) / field.rows();
    const double ch = static_cast<double>(y0 - y1) / field.cols();
    for (int i = 0; i < field.rows(); ++i) {
        for (int j = 0; j < field.cols(); ++j) {
            const double px = x0 + cw * i;
            const double py = y0 - ch * (j + 1);
            os << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cw + 0.5
               << "\" height=\"" << ch + 0.5 << "\" fill=\""
               << heat_color(vr.frac(field.at(i, j))) << "\"/>\n";
        }
    }
    os << "<text x=\"" << x1 - 4 << "\" y=\"" << y1 - 6
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">range ["
       << num(vr.lo) << ", " << num(vr.hi) << "]</text>\n";
    os << "</svg>\n";
    save(path, os.str());
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& out_dir,
                                              const Mesh& mesh,
                                              const StateField& v, const StateField& n,
                                              const StateField& m, const StateField& h,
                                              double x_fixed) {
    if (v.rows() == 0 || n.rows() == 0 || m.rows() == 0 || h.rows() == 0) {
        throw std::invalid_argument("emit_plots: empty result");
    }
    int j_fixed = 0;
    double best = std::abs(mesh.xmesh[0] - x_fixed);
    for (int j = 1; j < mesh.max_x; ++j) {
        const double d = std::abs(mesh.xmesh[j] - x_fixed);
        if (d < best) {
            best = d;
            j_fixed = j;
        }
    }

    std::vector<double> vt(mesh.max_t), nt(mesh.max_t), mt(mesh.max_t), ht(mesh.max_t);
    for (int i = 0; i < mesh.max_t; ++i) {
        vt[i] = v.at(i, j_fixed);
        nt[i] = n.at(i, j_fixed);
        mt[i] = m.at(i, j_fixed);
        ht[i] = h.at(i, j_fixed);
    }
    const std::string at_x = " at x = " + num(mesh.xmesh[j_fixed]);

    std::vector<std::filesystem::path> written;
    auto p1 = out_dir / "v_trace.svg";
    write_line_chart_svg(p1, "membrane potential" + at_x, "t [ms]", "v [mV]",
                         {{"v", "#1f77b4", &mesh.tmesh, &vt}});
    written.push_back(p1);

    auto p2 = out_dir / "v_surface.svg";
    write_heatmap_svg(p2, "membrane potential v(t,x)", mesh, v);
    written.push_back(p2);

    auto p3 = out_dir / "gating.svg";
    write_line_chart_svg(p3, "gating fractions" + at_x, "t [ms]", "fraction",
                         {{"n", "#1f77b4", &mesh.tmesh, &nt},
                          {"m", "#ff7f0e", &mesh.tmesh, &mt},
                          {"h", "#2ca02c", &mesh.tmesh, &ht}});
    written.push_back(p3);
    return written;
}

} // namespace hhsmc

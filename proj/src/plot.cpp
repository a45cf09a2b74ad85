#include "forge/plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace forge {

namespace {

const char* const kPalette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                                "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << x;
    return s.str();
}

struct Pt {
    double x, y;
};

}  // namespace

std::string simplex_cell_svg(const DiscreteLoss& loss, const std::string& title) {
    if (loss.num_outcomes() != 3) throw std::invalid_argument("simplex plots need exactly three outcomes");
    const double side = 400, margin = 50, height = side * std::sqrt(3.0) / 2;
    const double width = side + 2 * margin, total_h = height + 2 * margin + 30;
    // e1 bottom left, e2 bottom right, e3 top.
    auto project = [&](const Vec& p) {
        double a = p[1].get_d(), b = p[2].get_d();
        return Pt{margin + side * (a + b / 2), margin + 30 + height * (1 - b)};
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(total_h)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";

    auto property = finite_property(loss);
    for (std::size_t r = 0; r < property.cells.size(); ++r) {
        const auto& cell = property.cells[r];
        auto deep = deepest_point(cell);
        if (!deep || sgn(deep->slack) <= 0) continue;  // lower-dimensional cells are boundaries
        auto vs = enumerate_vertices(cell);
        std::vector<Pt> pts;
        double cx = 0, cy = 0;
        for (const auto& v : vs) {
            pts.push_back(project(v));
            cx += pts.back().x;
            cy += pts.back().y;
        }
        cx /= static_cast<double>(pts.size());
        cy /= static_cast<double>(pts.size());
        std::sort(pts.begin(), pts.end(), [&](const Pt& a, const Pt& b) {
            return std::atan2(a.y - cy, a.x - cx) < std::atan2(b.y - cy, b.x - cx);
        });
        svg << "<polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) svg << (i ? " " : "") << fmt(pts[i].x) << ',' << fmt(pts[i].y);
        svg << "\" fill=\"" << kPalette[r % kPaletteSize] << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy + 4) << "\" text-anchor=\"middle\">"
            << escape(property.reports[r]) << "</text>\n";
    }

    const Vec corners[3] = {unit(3, 0), unit(3, 1), unit(3, 2)};
    svg << "<polygon points=\"";
    for (int i = 0; i < 3; ++i) {
        Pt p = project(corners[i]);
        svg << (i ? " " : "") << fmt(p.x) << ',' << fmt(p.y);
    }
    svg << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    const double dx[3] = {-8, 8, 0}, dy[3] = {16, 16, -8};
    const char* anchor[3] = {"end", "start", "middle"};
    for (int i = 0; i < 3; ++i) {
        Pt p = project(corners[i]);
        svg << "<text x=\"" << fmt(p.x + dx[i]) << "\" y=\"" << fmt(p.y + dy[i]) << "\" text-anchor=\"" << anchor[i]
            << "\">" << escape(loss.outcomes().label(static_cast<std::size_t>(i))) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string envelope_svg(const Link& link, const Rational& lo, const Rational& hi, const Rational& resolution,
                         const std::string& title) {
    const auto& phi = link.spec().embedding;
    if (phi.size() == 0 || phi.point(0).size() != 2) throw std::invalid_argument("envelope plots need a two-dimensional link");
    if (hi <= lo || sgn(resolution) <= 0) throw std::invalid_argument("envelope plot box or resolution is invalid");
    Rational cells_q = (hi - lo) / resolution;
    const std::size_t cells = static_cast<std::size_t>(std::ceil(cells_q.get_d()));
    const double size = 480, margin = 40, legend_w = 200;
    const double px = size / static_cast<double>(cells);
    const double lo_d = lo.get_d(), span = Rational(hi - lo).get_d();
    auto to_x = [&](double u) { return margin + (u - lo_d) / span * size; };
    auto to_y = [&](double u) { return margin + 30 + (1 - (u - lo_d) / span) * size; };

    std::map<std::string, std::size_t> colors;  // Psi key -> palette slot, by first appearance
    std::vector<std::string> keys;
    std::vector<std::vector<std::size_t>> grid(cells, std::vector<std::size_t>(cells));
    for (std::size_t i = 0; i < cells; ++i) {
        for (std::size_t j = 0; j < cells; ++j) {
            Vec u{lo + resolution * (Rational(static_cast<long>(i)) + Rational(1, 2)),
                  lo + resolution * (Rational(static_cast<long>(j)) + Rational(1, 2))};
            std::string key = "{";
            auto psi = link.envelope(u);
            for (std::size_t k = 0; k < psi.size(); ++k) key += (k ? "," : "") + phi.reports()[psi[k]];
            key += "}";
            auto [it, inserted] = colors.emplace(key, keys.size());
            if (inserted) keys.push_back(key);
            grid[i][j] = it->second;
        }
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(size + 2 * margin + legend_w) << "\" height=\""
        << fmt(size + 2 * margin + 30) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt(margin + size / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
    // Horizontal runs of equal color become one rectangle.
    for (std::size_t j = 0; j < cells; ++j) {
        std::size_t i = 0;
        while (i < cells) {
            std::size_t end = i;
            while (end + 1 < cells && grid[end + 1][j] == grid[i][j]) ++end;
            double x = margin + px * static_cast<double>(i);
            double y = margin + 30 + size - px * static_cast<double>(j + 1);
            svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(px * static_cast<double>(end - i + 1))
                << "\" height=\"" << fmt(px) << "\" fill=\"" << kPalette[grid[i][j] % kPaletteSize] << "\"/>\n";
            i = end + 1;
        }
    }
    svg << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin + 30) << "\" width=\"" << fmt(size) << "\" height=\""
        << fmt(size) << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (sgn(lo) < 0 && sgn(hi) > 0) {
        svg << "<line x1=\"" << fmt(to_x(0)) << "\" y1=\"" << fmt(to_y(lo_d)) << "\" x2=\"" << fmt(to_x(0)) << "\" y2=\""
            << fmt(to_y(hi.get_d())) << "\" stroke=\"#666\" stroke-dasharray=\"4 3\"/>\n";
        svg << "<line x1=\"" << fmt(to_x(lo_d)) << "\" y1=\"" << fmt(to_y(0)) << "\" x2=\"" << fmt(to_x(hi.get_d()))
            << "\" y2=\"" << fmt(to_y(0)) << "\" stroke=\"#666\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (std::size_t r = 0; r < phi.size(); ++r) {
        double x = to_x(phi.point(r)[0].get_d()), y = to_y(phi.point(r)[1].get_d());
        svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"5\" fill=\"black\"/>\n";
        svg << "<text x=\"" << fmt(x + 7) << "\" y=\"" << fmt(y - 7) << "\" font-weight=\"bold\">" << escape(phi.reports()[r])
            << "</text>\n";
    }
    double ly = margin + 40;
    const double lx = margin + size + 20;
    svg << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" font-weight=\"bold\">Psi(u)</text>\n";
    for (std::size_t k = 0; k < keys.size(); ++k) {
        ly += 20;
        svg << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 11) << "\" width=\"14\" height=\"14\" fill=\""
            << kPalette[k % kPaletteSize] << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << fmt(lx + 20) << "\" y=\"" << fmt(ly) << "\">" << escape(keys[k]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace forge

#include "declos/render.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace declos {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                          "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8"};
constexpr int kPaletteSize = 11;

}  // namespace

std::string render_svg(const SimTrace& trace) {
    const ScenarioConfig& cfg = trace.config;
    const AARect& b = cfg.bounds;
    const double scale = 32.0, margin = 1.0;

    auto px = [&](double x) { return (x - b.xmin + margin) * scale; };
    auto py = [&](double y) { return (b.ymax + margin - y) * scale; };

    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);

    double wpx = (b.xmax - b.xmin + 2 * margin) * scale;
    double hpx = (b.ymax - b.ymin + 2 * margin) * scale;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << wpx << "\" height=\"" << hpx
       << "\" viewBox=\"0 0 " << wpx << " " << hpx << "\">\n";
    os << "<rect width=\"" << wpx << "\" height=\"" << hpx << "\" fill=\"#fdfdfd\"/>\n";
    os << "<rect x=\"" << px(b.xmin) << "\" y=\"" << py(b.ymax) << "\" width=\""
       << (b.xmax - b.xmin) * scale << "\" height=\"" << (b.ymax - b.ymin) * scale
       << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"2\"/>\n";

    Workspace w = cfg.build_workspace();
    for (const AARect& r : w.planning)
        os << "<rect x=\"" << px(r.xmin) << "\" y=\"" << py(r.ymax) << "\" width=\""
           << (r.xmax - r.xmin) * scale << "\" height=\"" << (r.ymax - r.ymin) * scale
           << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    for (const AARect& r : w.physical)
        os << "<rect x=\"" << px(r.xmin) << "\" y=\"" << py(r.ymax) << "\" width=\""
           << (r.xmax - r.xmin) * scale << "\" height=\"" << (r.ymax - r.ymin) * scale
           << "\" fill=\"#555\"/>\n";

    int idx = 0;
    for (const AgentSpec& ag : cfg.agents) {
        const char* color = kPalette[idx++ % kPaletteSize];
        std::ostringstream pts;
        pts.setf(std::ios::fixed);
        pts.precision(2);
        for (const TickRecord& rec : trace.records) {
            auto it = rec.positions.find(ag.id);
            if (it == rec.positions.end()) continue;
            pts << px(it->second.x) << "," << py(it->second.y) << " ";
        }
        os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" opacity=\"0.85\"/>\n";

        // goal region: inf-norm ball of width goal_tolerance, i.e. a square
        double half = cfg.params.goal_tolerance / 2.0 * scale;
        os << "<rect x=\"" << px(ag.goal.x) - half << "\" y=\"" << py(ag.goal.y) - half
           << "\" width=\"" << 2 * half << "\" height=\"" << 2 * half
           << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1\" stroke-dasharray=\"2 2\"/>\n";

        double cx = px(ag.start.x), cy = py(ag.start.y), arm = 5.0;
        os << "<path d=\"M" << cx - arm << " " << cy - arm << " L" << cx + arm << " " << cy + arm
           << " M" << cx - arm << " " << cy + arm << " L" << cx + arm << " " << cy - arm
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << cx + 6 << "\" y=\"" << cy - 6 << "\" font-size=\"12\" fill=\""
           << color << "\">" << ag.id << "</text>\n";

        if (!trace.records.empty()) {
            auto it = trace.records.back().positions.find(ag.id);
            if (it != trace.records.back().positions.end())
                os << "<circle cx=\"" << px(it->second.x) << "\" cy=\"" << py(it->second.y)
                   << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const SimTrace& trace, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << render_svg(trace);
}

}  // namespace declos

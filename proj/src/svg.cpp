#include "trajmine/svg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "trajmine/csv.hpp"

namespace trajmine {

namespace {

std::string num(double v) { return format_double(v); }

}  // namespace

SvgWriter::SvgWriter(int width_px, int height_px) : width_(width_px), height_(height_px) {}

void SvgWriter::open_group(const std::string& attrs) {
    body_ += "<g";
    if (!attrs.empty()) {
        body_ += ' ';
        body_ += attrs;
    }
    body_ += ">\n";
    ++open_groups_;
}

void SvgWriter::close_group() {
    if (open_groups_ <= 0) throw std::logic_error("SvgWriter: no group to close");
    body_ += "</g>\n";
    --open_groups_;
}

void SvgWriter::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width, double opacity) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
    if (opacity < 1.0) body_ += " stroke-opacity=\"" + num(opacity) + "\"";
    body_ += "/>\n";
}

void SvgWriter::polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                         double stroke_width, double opacity) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(stroke_width) + "\"";
    if (opacity < 1.0) body_ += " stroke-opacity=\"" + num(opacity) + "\"";
    body_ += " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) body_ += ' ';
        body_ += num(pts[i].x) + "," + num(pts[i].y);
    }
    body_ += "\"/>\n";
}

void SvgWriter::circle(double cx, double cy, double r, const std::string& fill,
                       const std::string& stroke, double stroke_width) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
             "\" fill=\"" + fill + "\"";
    if (stroke != "none") {
        body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
    }
    body_ += "/>\n";
}

void SvgWriter::text(double x, double y, const std::string& content, double size,
                     const std::string& fill) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
             "\" font-family=\"sans-serif\" fill=\"" + fill + "\">" + xml_escape(content) +
             "</text>\n";
}

std::string SvgWriter::finish() const {
    if (open_groups_ != 0) throw std::logic_error("SvgWriter: unclosed group");
    std::string doc = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    doc += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(width_) + "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " +
           std::to_string(width_) + " " + std::to_string(height_) + "\">\n";
    doc += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    doc += body_;
    doc += "</svg>\n";
    return doc;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

double heading_hue(double heading_deg) {
    double hue = std::fmod(heading_deg, 360.0);
    if (hue < 0.0) hue += 360.0;
    return hue;
}

std::string hsv_to_hex(double hue, double saturation, double value) {
    const double c = value * saturation;
    const double hp = heading_hue(hue) / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    if (hp < 1.0) {
        r = c;
        g = x;
    } else if (hp < 2.0) {
        r = x;
        g = c;
    } else if (hp < 3.0) {
        g = c;
        b = x;
    } else if (hp < 4.0) {
        g = x;
        b = c;
    } else if (hp < 5.0) {
        r = x;
        b = c;
    } else {
        r = c;
        b = x;
    }
    const double m = value - c;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                  static_cast<int>(std::lround((g + m) * 255)),
                  static_cast<int>(std::lround((b + m) * 255)));
    return buf;
}

std::string heading_color(double heading_deg) {
    return hsv_to_hex(heading_hue(heading_deg), 0.85, 0.85);
}

}  // namespace trajmine

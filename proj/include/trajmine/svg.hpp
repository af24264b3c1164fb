#ifndef TRAJMINE_SVG_HPP
#define TRAJMINE_SVG_HPP

#include <string>
#include <vector>

#include "trajmine/geometry.hpp"

namespace trajmine {

/// Minimal SVG 1.1 document builder (pixel coordinates, y growing down).
class SvgWriter {
  public:
    SvgWriter(int width_px, int height_px);

    void open_group(const std::string& attrs);
    void close_group();
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width, double opacity = 1.0);
    void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double stroke_width,
                  double opacity = 1.0);
    void circle(double cx, double cy, double r, const std::string& fill,
                const std::string& stroke = "none", double stroke_width = 0.0);
    void text(double x, double y, const std::string& content, double size,
              const std::string& fill);

    /// Complete document including the closing tag.
    std::string finish() const;

  private:
    int width_;
    int height_;
    int open_groups_ = 0;
    std::string body_;
};

std::string xml_escape(const std::string& text);

/// Hue on the direction color wheel for a heading in degrees: the heading
/// taken modulo 360 into [0, 360), so heading 0 maps to hue 0.
double heading_hue(double heading_deg);

/// "#rrggbb" for hue [0,360), saturation and value in [0,1].
std::string hsv_to_hex(double hue, double saturation, double value);

/// Wheel color used for flow of the given heading.
std::string heading_color(double heading_deg);

}  // namespace trajmine

#endif

#include "barnorm/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "barnorm/error.hpp"

namespace barnorm {
namespace {

std::string num(double v, const char* fmt = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << bytes;
  out.flush();
  if (!out) throw Error(ErrorKind::io, "error writing '" + path.string() + "'");
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string dash_array(LineStyle line, double u) {
  const auto g = [](double v) { return num(v, "%.6g"); };
  switch (line) {
    case LineStyle::solid:
      return "";
    case LineStyle::dotted:
      return g(1.5 * u) + "," + g(3 * u);
    case LineStyle::dash_dot:
      return g(9 * u) + "," + g(3 * u) + "," + g(1.5 * u) + "," + g(3 * u);
    case LineStyle::dashed:
      return g(8 * u) + "," + g(4 * u);
  }
  return "";
}

Mat2 inverse(const Mat2& a) {
  const double d = a.det();
  return {a.a22 / d, -a.a12 / d, -a.a21 / d, a.a11 / d};
}

const Stroke kImageStrokes[] = {
    {"red", LineStyle::dotted, ""},      {"blue", LineStyle::dash_dot, ""},
    {"magenta", LineStyle::dashed, ""},  {"darkorange", LineStyle::dotted, ""},
    {"teal", LineStyle::dash_dot, ""},   {"purple", LineStyle::dashed, ""},
};

Stroke image_stroke(std::size_t i, std::string label) {
  Stroke s = kImageStrokes[i % std::size(kImageStrokes)];
  s.label = std::move(label);
  return s;
}

}  // namespace

void write_csv(const BoundTrace& trace, std::ostream& out) {
  if (trace.empty()) throw Error(ErrorKind::invalid_input, "cannot write an empty bound trace");
  out << "n,rho_lo,rho_hi,gamma,vertices\n";
  for (const TraceRow& r : trace) {
    out << r.n << ',' << num(r.rho_lo) << ',' << num(r.rho_hi) << ',' << num(r.gamma) << ','
        << r.vertices << '\n';
  }
}

void emit_csv(const BoundTrace& trace, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_csv(trace, buf);
  write_file(path, buf.str());
}

Shape outline(const SymPolygon& p, Stroke stroke) { return {p.vertices(), std::move(stroke)}; }

std::string render_svg(std::span<const Shape> shapes) {
  if (shapes.empty()) throw Error(ErrorKind::invalid_input, "nothing to draw");
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const Shape& s : shapes) {
    for (const Vec2& v : s.points) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw Error(ErrorKind::invalid_input, "non-finite point in figure");
      }
      if (first) {
        xmin = xmax = v.x;
        ymin = ymax = v.y;
        first = false;
      }
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
  }
  double w = xmax - xmin, h = ymax - ymin;
  const double span = std::max({w, h, 1e-300});
  if (w <= 0) w = span;
  if (h <= 0) h = span;
  const double pad_x = 0.1 * w, pad_y = 0.1 * h;
  const double vx = xmin - pad_x, vy = -(ymax + pad_y), vw = w + 2 * pad_x, vh = h + 2 * pad_y;
  const double px_w = 600.0, px_h = 600.0 * vh / vw;
  const double u = vw / px_w;  // one output pixel in user units
  const auto g = [](double v) { return num(v, "%.10g"); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << g(px_w)
      << "\" height=\"" << g(px_h) << "\" viewBox=\"" << g(vx) << ' ' << g(vy) << ' ' << g(vw)
      << ' ' << g(vh) << "\">\n"
      << "<rect x=\"" << g(vx) << "\" y=\"" << g(vy) << "\" width=\"" << g(vw) << "\" height=\""
      << g(vh) << "\" fill=\"white\"/>\n";
  for (const Shape& s : shapes) {
    if (s.points.empty()) continue;
    out << "<path d=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      out << (i == 0 ? "M" : " L") << g(s.points[i].x) << ',' << g(-s.points[i].y);
    }
    out << " Z\" fill=\"none\" stroke=\"" << escape(s.stroke.color) << "\" stroke-width=\""
        << g(1.5 * u) << "\" stroke-linejoin=\"round\"";
    if (s.stroke.line == LineStyle::dotted) out << " stroke-linecap=\"round\"";
    const std::string dashes = dash_array(s.stroke.line, u);
    if (!dashes.empty()) out << " stroke-dasharray=\"" << dashes << '"';
    if (s.stroke.label.empty()) {
      out << "/>\n";
    } else {
      out << "><title>" << escape(s.stroke.label) << "</title></path>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void emit_svg(std::span<const Shape> shapes, const std::filesystem::path& path) {
  write_file(path, render_svg(shapes));
}

std::vector<Shape> dk_figure(const SymPolygon& m, const MatrixSet& set, double rho,
                             const SymPolygon* barabanov_ball) {
  std::vector<Shape> shapes;
  shapes.push_back(outline(m, {"black", LineStyle::solid, "M"}));
  if (barabanov_ball) shapes.push_back(outline(*barabanov_ball, {"green", LineStyle::solid, "S"}));
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::vector<Vec2> pts = mapped_vertices(m, (1.0 / rho) * set[i]);
    shapes.push_back({std::move(pts), image_stroke(i, "rho^-1 A" + std::to_string(i + 1) + " M")});
  }
  return shapes;
}

std::vector<Shape> barabanov_figure(const SymPolygon& s, const MatrixSet& set, double rho) {
  std::vector<Shape> shapes;
  shapes.push_back(outline(s, {"black", LineStyle::solid, "S"}));
  const double tiny = 1e-14;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Mat2& a = set[i];
    if (std::fabs(a.det()) <= tiny * a.max_abs() * a.max_abs()) continue;  // unbounded strip
    std::vector<Vec2> pts = mapped_vertices(s, rho * inverse(a));
    shapes.push_back(
        {std::move(pts), image_stroke(i, "|A" + std::to_string(i + 1) + " x| <= rho")});
  }
  return shapes;
}

}  // namespace barnorm

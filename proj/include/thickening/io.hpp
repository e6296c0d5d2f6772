#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "thickening/errors.hpp"
#include "thickening/filtration.hpp"
#include "thickening/measure.hpp"
#include "thickening/metric.hpp"
#include "thickening/persistence.hpp"
#include "thickening/transport.hpp"

namespace thk::io {

using json = nlohmann::json;

/// Shortest decimal with at most 12 significant digits; '.' regardless of locale.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

/// v rounded to 12 significant digits, so JSON serialization prints at most 12.
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  const std::string s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

inline json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(round12(v)); }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary sibling file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorKind::InvalidArgument, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\xEF' ||
                        s.front() == '\xBB' || s.front() == '\xBF'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto l : split(text, '\n')) {
    l = trim(l);
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

}  // namespace detail

/// Numeric CSV. A first line whose first token is not a number is a header.
inline Matrix parse_numeric_csv(std::string_view text) {
  Matrix rows;
  auto ls = detail::lines(text);
  for (std::size_t li = 0; li < ls.size(); ++li) {
    auto tokens = detail::split(ls[li], ',');
    double probe = 0.0;
    if (li == 0 && !detail::parse_double(tokens.front(), probe)) continue;
    std::vector<double> row;
    for (auto t : tokens) {
      double v = 0.0;
      if (!detail::parse_double(t, v)) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(li + 1) + ": bad number '" + std::string(t) + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline FiniteMetricSpace read_distance_matrix(const std::filesystem::path& path) {
  return from_distance_matrix(parse_numeric_csv(read_file(path)));
}

inline PointCloud read_point_cloud(const std::filesystem::path& path) {
  return PointCloud(parse_numeric_csv(read_file(path)));
}

/// CSV row(s) of weights, or JSON {"weights": [...]}; positional alignment.
inline Measure parse_measure(std::string_view text, const FiniteMetricSpace& space) {
  const auto t = detail::trim(text);
  std::vector<double> w;
  if (!t.empty() && t.front() == '{') {
    try {
      const auto j = json::parse(t);
      w = j.at("weights").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("measure JSON: ") + e.what());
    }
  } else {
    for (const auto& row : parse_numeric_csv(text)) w.insert(w.end(), row.begin(), row.end());
  }
  return Measure(space, std::move(w));
}

inline Measure read_measure(const std::filesystem::path& path, const FiniteMetricSpace& space) {
  return parse_measure(read_file(path), space);
}

/// Two columns phi, psi; the shorter column may leave trailing cells empty.
inline Correspondence parse_correspondence(std::string_view text) {
  Correspondence c;
  auto ls = detail::lines(text);
  bool phi_done = false, psi_done = false;
  for (std::size_t li = 0; li < ls.size(); ++li) {
    auto tokens = detail::split(ls[li], ',');
    if (tokens.size() != 2) throw Error(ErrorKind::ParseError, "correspondence rows need two columns");
    double a = 0.0, b = 0.0;
    const bool has_a = detail::parse_double(tokens[0], a);
    const bool has_b = detail::parse_double(tokens[1], b);
    if (li == 0 && !has_a && !detail::trim(tokens[0]).empty()) continue;  // header
    auto take = [](bool has, double v, bool& done, std::vector<std::size_t>& dst, std::string_view raw) {
      if (has) {
        if (done || v < 0 || v != std::floor(v)) throw Error(ErrorKind::ParseError, "bad correspondence index");
        dst.push_back(static_cast<std::size_t>(v));
      } else if (detail::trim(raw).empty()) {
        done = true;
      } else {
        throw Error(ErrorKind::ParseError, "bad correspondence index '" + std::string(raw) + "'");
      }
    };
    take(has_a, a, phi_done, c.phi, tokens[0]);
    take(has_b, b, psi_done, c.psi, tokens[1]);
  }
  return c;
}

inline json diagram_to_json(const PersistenceDiagram& dgm) {
  json out = json::array();
  for (int k : dgm.degrees()) {
    json intervals = json::array();
    for (const auto& iv : dgm.intervals(k)) intervals.push_back({round12(iv.birth), number_or_inf(iv.death)});
    out.push_back({{"degree", k}, {"intervals", std::move(intervals)}});
  }
  return out;
}

/// Accepts the array form or a single {"degree", "intervals"} object.
inline PersistenceDiagram diagram_from_json(const json& j) {
  PersistenceDiagram dgm;
  auto one = [&](const json& block) {
    const int k = block.at("degree").get<int>();
    dgm.touch(k);
    for (const auto& iv : block.at("intervals")) {
      const double b = iv.at(0).get<double>();
      const double d = iv.at(1).is_string() ? kInfinity : iv.at(1).get<double>();
      dgm.add(k, {b, d});
    }
  };
  try {
    if (j.is_array()) {
      for (const auto& block : j) one(block);
    } else {
      one(j);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("diagram JSON: ") + e.what());
  }
  return dgm;
}

inline std::string diagram_to_csv(const PersistenceDiagram& dgm) {
  std::string out = "degree,birth,death\n";
  for (int k : dgm.degrees())
    for (const auto& iv : dgm.intervals(k))
      out += std::to_string(k) + "," + format_number(iv.birth) + "," + format_number(iv.death) + "\n";
  return out;
}

/// One JSON object per line: {"simplex":[...],"value":v}.
inline std::string complex_to_jsonl(const FilteredComplex& fc) {
  std::string out;
  for (const auto& e : fc.entries) {
    out += json{{"simplex", e.simplex.vertices()}, {"value", round12(e.value)}}.dump();
    out += '\n';
  }
  return out;
}

inline json plan_to_json(const TransportPlan& plan) {
  json rows = json::array();
  for (std::size_t i = 0; i < plan.size(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < plan.size(); ++j) r.push_back(round12(plan(i, j)));
    rows.push_back(std::move(r));
  }
  std::vector<std::size_t> labels(plan.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;
  return {{"rows", labels}, {"cols", labels}, {"plan", std::move(rows)}};
}

/// Birth/death scatter plot. Infinite deaths sit at 1.1x the largest finite
/// value and are drawn as triangles.
inline std::string diagram_to_svg(const PersistenceDiagram& dgm) {
  double top = 0.0;
  for (int k : dgm.degrees())
    for (const auto& iv : dgm.intervals(k)) {
      top = std::max(top, iv.birth);
      if (iv.finite()) top = std::max(top, iv.death);
    }
  if (top <= 0.0) top = 1.0;
  const double cap = 1.1 * top;
  const double size = 400.0, margin = 40.0, span = size - 2 * margin;
  auto sx = [&](double v) { return format_number(margin + span * v / cap); };
  auto sy = [&](double v) { return format_number(size - margin - span * v / cap); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  out += "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
  out += "<line x1=\"" + sx(0) + "\" y1=\"" + sy(0) + "\" x2=\"" + sx(cap) + "\" y2=\"" + sy(0) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + sx(0) + "\" y1=\"" + sy(0) + "\" x2=\"" + sx(0) + "\" y2=\"" + sy(cap) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + sx(0) + "\" y1=\"" + sy(0) + "\" x2=\"" + sx(cap) + "\" y2=\"" + sy(cap) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  out += "<line x1=\"" + sx(0) + "\" y1=\"" + sy(cap) + "\" x2=\"" + sx(cap) + "\" y2=\"" + sy(cap) +
         "\" stroke=\"lightgray\"/>\n";
  out += "<text x=\"" + sx(cap / 2) + "\" y=\"395\" font-size=\"12\" text-anchor=\"middle\">birth</text>\n";
  out += "<text x=\"12\" y=\"" + sy(cap / 2) + "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 12 " +
         sy(cap / 2) + ")\">death</text>\n";
  out += "<text x=\"" + sx(cap) + "\" y=\"" + sy(0) + "\" dy=\"14\" font-size=\"10\" text-anchor=\"end\">" +
         format_number(cap) + "</text>\n";
  for (int k : dgm.degrees()) {
    const std::string color = colors[static_cast<std::size_t>(k) % 6];
    for (const auto& iv : dgm.intervals(k)) {
      if (iv.finite()) {
        out += "<circle cx=\"" + sx(iv.birth) + "\" cy=\"" + sy(iv.death) + "\" r=\"4\" fill=\"" + color +
               "\"><title>H" + std::to_string(k) + "</title></circle>\n";
      } else {
        const double x = margin + span * iv.birth / cap, y = size - margin - span;
        out += "<polygon points=\"" + format_number(x - 5) + "," + format_number(y + 4) + " " + format_number(x + 5) +
               "," + format_number(y + 4) + " " + format_number(x) + "," + format_number(y - 5) + "\" fill=\"" +
               color + "\"><title>H" + std::to_string(k) + " infinite</title></polygon>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace thk::io

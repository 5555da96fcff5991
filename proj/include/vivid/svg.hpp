/*
 * Copyright 2026 The vivid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Tiny string-building SVG 1.1 writer. Output is a pure function of the calls
// made, so documents are byte-reproducible.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "vivid/common.hpp"

namespace vivid::svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Characters outside [A-Za-z0-9_.-] become '_' so names are valid in ids.
inline std::string id_safe(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out;
}

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {
    if (!(width > 0 && height > 0)) throw Error("plot width and height must be positive");
  }

  void raw(std::string_view s) {
    body_ += s;
    body_ += '\n';
  }

  void open_group(const std::string& attrs) { raw("<g " + attrs + ">"); }
  void close_group() { raw("</g>"); }

  void rect(double x, double y, double w, double h, const std::string& attrs) {
    raw("<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
        num(h) + "\" " + attrs + "/>");
  }

  void line(double x1, double y1, double x2, double y2, const std::string& attrs) {
    raw("<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
        num(y2) + "\" " + attrs + "/>");
  }

  void circle(double cx, double cy, double r, const std::string& attrs) {
    raw("<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" " + attrs + "/>");
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& attrs) {
    std::string p;
    for (const auto& [x, y] : pts) {
      if (!p.empty()) p += ' ';
      p += num(x) + "," + num(y);
    }
    raw("<polyline points=\"" + p + "\" fill=\"none\" " + attrs + "/>");
  }

  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& attrs) {
    std::string p;
    for (const auto& [x, y] : pts) {
      if (!p.empty()) p += ' ';
      p += num(x) + "," + num(y);
    }
    raw("<polygon points=\"" + p + "\" " + attrs + "/>");
  }

  void text(double x, double y, std::string_view content, const std::string& attrs = "") {
    raw("<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"" + (attrs.empty() ? "" : " " + attrs) +
        ">" + escape(content) + "</text>");
  }

  void defs(std::string_view content) { defs_ += content; }

  std::string str() const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width_) +
           "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    if (!defs_.empty()) out += "<defs>\n" + defs_ + "</defs>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
           "\" fill=\"#ffffff\"/>\n";
    out += body_;
    out += "</svg>\n";
    return out;
  }

 private:
  double width_;
  double height_;
  std::string defs_;
  std::string body_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace vivid::svg

#include "breuil/blocks.hpp"

#include <charconv>
#include <map>

namespace breuil {

namespace {

struct Value {
  std::string text;
  int line;
  int column;
};

std::string_view trim(std::string_view s, int& offset) {
  size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  offset += static_cast<int>(b);
  return s.substr(b, e - b);
}

long parse_long(const Value& v) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (ec != std::errc() || ptr != v.text.data() + v.text.size())
    throw ParseError(v.line, v.column, "expected an integer, got '" + v.text + "'");
  return out;
}

std::vector<PolyText> split_row(const Value& v) {
  std::vector<PolyText> out;
  size_t start = 0;
  while (true) {
    size_t comma = v.text.find(',', start);
    std::string_view piece = std::string_view(v.text).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    int col = v.column + static_cast<int>(start);
    std::string_view t = trim(piece, col);
    if (t.empty()) throw ParseError(v.line, col, "empty matrix entry");
    out.push_back({std::string(t), v.line, col});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct RawBlock {
  std::string name;
  int line;
  std::vector<std::pair<Value, Value>> entries;  // key, value
};

}  // namespace

JobSpec parse_job(std::string_view text) {
  std::vector<RawBlock> blocks;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    int col = 1;
    std::string_view t = trim(line, col);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(line_no, col, "unterminated block header");
      blocks.push_back({std::string(t.substr(1, t.size() - 2)), line_no, {}});
      continue;
    }
    if (blocks.empty()) throw ParseError(line_no, col, "expected a block header such as [frame]");
    size_t eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, col, "expected 'key = value'");
    int kcol = col, vcol = col + static_cast<int>(eq) + 1;
    std::string_view key = trim(t.substr(0, eq), kcol);
    std::string_view val = trim(t.substr(eq + 1), vcol);
    if (key.empty()) throw ParseError(line_no, kcol, "missing key");
    if (val.empty()) throw ParseError(line_no, vcol, "missing value for '" + std::string(key) + "'");
    blocks.back().entries.push_back({{std::string(key), line_no, kcol}, {std::string(val), line_no, vcol}});
  }

  JobSpec job;
  for (const auto& b : blocks) {
    if (b.name == "frame") {
      if (job.frame) throw ParseError(b.line, 1, "duplicate [frame] block");
      FrameParams f;
      f.D = 0;
      f.r = 0;
      std::optional<Value> E;
      std::map<std::string, bool> seen;
      for (const auto& [k, v] : b.entries) {
        if (seen[k.text]) throw ParseError(k.line, k.column, "duplicate key '" + k.text + "'");
        seen[k.text] = true;
        if (k.text == "p") {
          long p = parse_long(v);
          if (p < 2) throw ParseError(v.line, v.column, "p must be a prime");
          f.p = static_cast<u64>(p);
        } else if (k.text == "r") {
          f.r = static_cast<int>(parse_long(v));
        } else if (k.text == "e") {
          f.e = static_cast<int>(parse_long(v));
        } else if (k.text == "a") {
          f.a = static_cast<int>(parse_long(v));
        } else if (k.text == "N") {
          f.N = static_cast<int>(parse_long(v));
        } else if (k.text == "D") {
          f.D = static_cast<int>(parse_long(v));
        } else if (k.text == "L") {
          f.L = static_cast<int>(parse_long(v));
        } else if (k.text == "amax") {
          f.max_level = static_cast<int>(parse_long(v));
        } else if (k.text == "E") {
          E = v;
        } else {
          throw ParseError(k.line, k.column, "unknown frame key '" + k.text + "'");
        }
      }
      for (const char* req : {"p", "e", "a", "N", "E"}) {
        if (!seen[req]) throw ParseError(b.line, 1, std::string("[frame] is missing '") + req + "'");
      }
      if (f.r < 0 || f.r > 8) throw ParseError(b.line, 1, "r must be between 0 and 8");
      f.E = parse_int_poly(E->text, f.variable_names(), E->line, E->column);
      job.frame = std::move(f);
      job.frame_line = b.line;
    } else if (b.name == "window") {
      WindowBlock w;
      w.line = b.line;
      for (const auto& [k, v] : b.entries) {
        if (k.text == "a") {
          w.level = static_cast<int>(parse_long(v));
        } else if (k.text == "d") {
          w.d = static_cast<int>(parse_long(v));
        } else if (k.text == "c") {
          w.c = static_cast<int>(parse_long(v));
        } else if (k.text == "row") {
          w.rows.push_back(split_row(v));
        } else {
          throw ParseError(k.line, k.column, "unknown window key '" + k.text + "'");
        }
      }
      if (w.d < 0 || w.c < 0) throw ParseError(b.line, 1, "[window] needs non-negative 'd' and 'c'");
      if (w.rows.empty()) throw ParseError(b.line, 1, "[window] has no 'row' lines");
      job.windows.push_back(std::move(w));
    } else if (b.name == "matrix") {
      if (job.matrix) throw ParseError(b.line, 1, "duplicate [matrix] block");
      MatrixBlock m;
      m.line = b.line;
      for (const auto& [k, v] : b.entries) {
        if (k.text != "row") throw ParseError(k.line, k.column, "unknown matrix key '" + k.text + "'");
        m.rows.push_back(split_row(v));
      }
      if (m.rows.empty()) throw ParseError(b.line, 1, "[matrix] has no 'row' lines");
      job.matrix = std::move(m);
    } else {
      throw ParseError(b.line, 1, "unknown block [" + b.name + "]");
    }
  }
  return job;
}

SMatrix build_matrix(const RingPtr& ring, const TextRows& rows) {
  const auto vars = ring->frame_params()->variable_names();
  std::vector<std::vector<SeriesElem>> out;
  for (const auto& row : rows) {
    if (row.size() != rows.front().size())
      throw ParseError(row.front().line, row.front().column, "ragged matrix rows");
    out.emplace_back();
    for (const auto& x : row) {
      out.back().push_back(SeriesElem::from_poly(ring, parse_int_poly(x.text, vars, x.line, x.column)));
    }
  }
  return SMatrix::from_rows(out);
}

Window build_window(const Frame& frame, const WindowBlock& block, int default_level) {
  const int level = block.level.value_or(default_level);
  if (level < 1 || level > frame.max_level())
    throw ParseError(block.line, 1, "window level " + std::to_string(level) + " is outside 1.." + std::to_string(frame.max_level()));
  const int h = block.d + block.c;
  if (static_cast<int>(block.rows.size()) != h || static_cast<int>(block.rows.front().size()) != h)
    throw ParseError(block.line, 1, "window matrix must be (d+c) x (d+c)");
  return make_window(frame, level, block.d, block.c, build_matrix(frame.series(level), block.rows));
}

}  // namespace breuil

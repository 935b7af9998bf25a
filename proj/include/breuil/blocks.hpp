#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "breuil/series.hpp"
#include "breuil/window.hpp"

namespace breuil {

/// A polynomial entry together with its position in the input text.
struct PolyText {
  std::string text;
  int line = 0;
  int column = 0;
};

using TextRows = std::vector<std::vector<PolyText>>;

struct WindowBlock {
  std::optional<int> level;
  int d = -1;
  int c = -1;
  TextRows rows;
  int line = 0;
};

struct MatrixBlock {
  TextRows rows;
  int line = 0;
};

/// Parsed input file: one [frame] block, any number of [window] blocks and at
/// most one [matrix] block. Lines are "key = value"; '#' starts a comment.
/// Matrix rows are "row = x, y, ..." lines.
struct JobSpec {
  std::optional<FrameParams> frame;
  int frame_line = 0;
  std::vector<WindowBlock> windows;
  std::optional<MatrixBlock> matrix;
};

/// Throws ParseError with line and column.
JobSpec parse_job(std::string_view text);

/// Builds a validated window over 𝔖_level (block level, else default_level).
/// Polynomial errors are ParseErrors; an invalid window throws Error.
Window build_window(const Frame& frame, const WindowBlock& block, int default_level);

SMatrix build_matrix(const RingPtr& ring, const TextRows& rows);

}  // namespace breuil

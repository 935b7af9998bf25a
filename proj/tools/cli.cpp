#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "breuil/blocks.hpp"
#include "breuil/breuil_module.hpp"
#include "breuil/display.hpp"
#include "breuil/tframe.hpp"
#include "checks.hpp"

namespace breuil_cli {

using namespace breuil;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kParse = 2;

// Exit with a usage/parse problem.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Exit with a validation failure after the report has been printed.
struct Invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Human mode: scalar facts as "key = value", matrices one row per line,
// violations as an indented list. Machine mode: one "key = value" per line.
class Emitter {
 public:
  Emitter(std::ostream& out, bool machine) : out_(out), machine_(machine) {}

  template <class T>
  void fact(const std::string& key, const T& value) {
    out_ << key << " = " << value << "\n";
  }

  template <class M>
  void matrix(const std::string& key, const M& m) {
    if (machine_) {
      fact(key, to_string(m));
      return;
    }
    out_ << key << " =\n";
    for (int i = 0; i < m.rows(); ++i) {
      out_ << "  [";
      for (int j = 0; j < m.cols(); ++j) out_ << (j ? ", " : "") << to_string(m(i, j));
      out_ << "]\n";
    }
  }

  void violations(const std::string& prefix, const std::vector<std::string>& items) {
    if (items.empty()) return;
    if (!machine_) out_ << (prefix.empty() ? "" : prefix + " ") << "violations:\n";
    for (size_t i = 0; i < items.size(); ++i) {
      if (machine_) {
        fact((prefix.empty() ? "" : prefix + ".") + "violation." + std::to_string(i + 1), items[i]);
      } else {
        out_ << "  - " << items[i] << "\n";
      }
    }
  }

 private:
  std::ostream& out_;
  bool machine_;
};

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read input file '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  JobSpec job;
  std::optional<Frame> frame;
};

// Each command takes exactly the blocks it needs; `windows` unset means any
// number of windows.
Loaded load(const std::string& path, std::optional<size_t> windows, bool matrix) {
  Loaded l{parse_job(read_input(path)), std::nullopt};
  if (!l.job.frame) throw UsageError("input has no [frame] block");
  if (windows && l.job.windows.size() != *windows)
    throw UsageError("command takes " + std::to_string(*windows) + " [window] block(s), found " +
                     std::to_string(l.job.windows.size()));
  if (matrix && !l.job.matrix) throw UsageError("input has no [matrix] block");
  if (!matrix && l.job.matrix) throw UsageError("command takes no [matrix] block");
  return l;
}

Frame checked_frame(const FrameParams& params, Emitter& em) {
  FrameReport rep = validate_frame(params);
  if (!rep.ok()) {
    em.fact("frame.valid", "false");
    em.violations("frame", rep.violations);
    throw Invalid("invalid frame");
  }
  return Frame(params);
}

int cmd_validate(const std::string& path, Emitter& em) {
  Loaded l = load(path, std::nullopt, false);
  FrameReport rep = validate_frame(*l.job.frame);
  bool ok = rep.ok();
  em.fact("frame.valid", ok ? "true" : "false");
  em.violations("frame", rep.violations);
  if (ok) {
    Frame f(*l.job.frame);
    for (size_t i = 0; i < l.job.windows.size(); ++i) {
      const std::string key = "window." + std::to_string(i + 1);
      try {
        Window w = build_window(f, l.job.windows[i], f.a());
        em.fact(key + ".valid", "true");
        em.fact(key + ".level", w.level);
        em.fact(key + ".lie_rank", lie(w).rank);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& ex) {
        ok = false;
        em.fact(key + ".valid", "false");
        em.violations(key, {ex.what()});
      }
    }
  }
  return ok ? kOk : kInvalid;
}

int cmd_special_fiber(const std::string& path, Emitter& em) {
  Loaded l = load(path, 1, false);
  Frame f = checked_frame(*l.job.frame, em);
  SpecialFiber sf = special_fiber(build_window(f, l.job.windows[0], f.a()));
  em.fact("height", sf.height);
  em.fact("dim", sf.dim);
  em.matrix("A0", sf.A0);
  em.matrix("Phi0", sf.Phi0);
  em.fact("nilpotent", sf.is_nilpotent ? "true" : "false");
  return kOk;
}

int cmd_display(const std::string& path, Emitter& em) {
  Loaded l = load(path, 1, false);
  Frame f = checked_frame(*l.job.frame, em);
  Window w = build_window(f, l.job.windows[0], f.a());
  DDisplay D = to_display(w, f.L());
  DisplayReport rep = validate_display(D);
  em.fact("level", D.level);
  em.fact("L", D.L);
  em.fact("d", D.d);
  em.fact("c", D.c);
  em.fact("tau", to_string(tau(f, w.level, f.L())));
  em.matrix("B", D.B);
  em.fact("lie_rank", display_lie(D));
  em.fact("valid", rep.ok() ? "true" : "false");
  em.violations("", rep.violations);
  return rep.ok() ? kOk : kInvalid;
}

int cmd_solve_iso(const std::string& path, Emitter& em) {
  Loaded l = load(path, 2, false);
  Frame f = checked_frame(*l.job.frame, em);
  const int a = f.a();
  Window w1 = build_window(f, l.job.windows[0], a + 1);
  Window w2 = build_window(f, l.job.windows[1], a + 1);
  if (w1.level != a + 1 || w2.level != a + 1)
    throw Invalid("solve-iso: windows must be given at level a + 1 = " + std::to_string(a + 1));
  if (w1.d != w2.d || w1.c != w2.c) throw Invalid("solve-iso: windows have different (d, c)");
  IsoSolution sol = solve_iso(f, a, w1.d, w1.c, w1.A, w2.A);
  if (sol.X.rows() == 1) {
    em.fact("X", to_string(sol.X(0, 0)));
  } else {
    em.matrix("X", sol.X);
  }
  em.fact("residual", sol.residual_zero ? "0" : "nonzero");
  return sol.residual_zero ? kOk : kInvalid;
}

int cmd_module(const std::string& path, Emitter& em) {
  Loaded l = load(path, 2, true);
  Frame f = checked_frame(*l.job.frame, em);
  Window src = build_window(f, l.job.windows[0], f.a());
  Window dst = build_window(f, l.job.windows[1], f.a());
  SMatrix U = build_matrix(dst.ring(), l.job.matrix->rows);
  IsogenyModule M = make_module(src, dst, U);
  ModuleReport rep = validate_breuil_module(M);
  em.fact("m", p_length(M));
  em.fact("order", group_order(M).get_str());
  em.fact("valid", rep.ok() ? "true" : "false");
  em.violations("", rep.violations);
  return rep.ok() ? kOk : kInvalid;
}

int cmd_nu(const std::optional<std::string>& path, std::optional<long> p, std::optional<long> a, Emitter& em) {
  if (path) {
    Loaded l = load(*path, 0, false);
    if (!p) p = static_cast<long>(l.job.frame->p);
    if (!a) a = l.job.frame->a;
  }
  if (!p || !a) throw UsageError("nu needs -p and -a (or an input file)");
  if (*p < 3 || *a < 1) throw UsageError("nu needs p >= 3 and a >= 1");
  em.fact("nu", nu(static_cast<int>(*a), static_cast<u64>(*p)));
  return kOk;
}

int cmd_selftest(bool serial, std::ostream& out) {
  int failed = 0;
  for (const auto& o : acceptance::run_all(!serial)) {
    out << acceptance::format(o) << "\n";
    failed += !o.pass;
  }
  return failed ? kInvalid : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Breuil windows, displays and Breuil modules at truncation"};
  app.require_subcommand(1);
  bool machine = false;
  app.add_flag("--machine", machine, "one 'key = value' fact per line");

  std::string input;
  auto add_input_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", input, "input file with [frame]/[window]/[matrix] blocks, '-' for stdin")->required();
    return sub;
  };
  auto* validate = add_input_cmd("validate", "validate the frame and every window");
  auto* sf = add_input_cmd("special-fiber", "special-fiber invariants of the first window");
  auto* display = add_input_cmd("display", "display of the first window");
  auto* solve = add_input_cmd("solve-iso", "isomorphism over T_a between two windows at level a + 1");
  auto* module = add_input_cmd("module", "Breuil module of the isogeny [matrix] from window 1 to window 2");
  auto* nu_cmd = app.add_subcommand("nu", "nu(a) = min over n >= a of n - v_p(n!)");
  std::optional<std::string> nu_input;
  std::optional<long> nu_p, nu_a;
  nu_cmd->add_option("input", nu_input, "optional input file supplying p and a");
  nu_cmd->add_option("-p", nu_p, "prime");
  nu_cmd->add_option("-a", nu_a, "level");
  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria at desk scale");
  bool serial = false;
  selftest->add_flag("--serial", serial, "run the criteria one after another");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParse;
  }

  Emitter em(out, machine);
  try {
    if (*validate) return cmd_validate(input, em);
    if (*sf) return cmd_special_fiber(input, em);
    if (*display) return cmd_display(input, em);
    if (*solve) return cmd_solve_iso(input, em);
    if (*module) return cmd_module(input, em);
    if (*nu_cmd) return cmd_nu(nu_input, nu_p, nu_a, em);
    if (*selftest) return cmd_selftest(serial, out);
  } catch (const ParseError& ex) {
    err << "parse error: " << ex.what() << "\n";
    return kParse;
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kParse;
  } catch (const Invalid& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalid;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kInvalid;
  }
  return kParse;
}

}  // namespace breuil_cli

#include "ellipt/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ellipt/errors.hpp"
#include "ellipt/harness.hpp"
#include "ellipt/streamlines.hpp"

namespace ellipt::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw ConfigError(key, "expected a finite number, got \"" + text + "\"");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  int value = 0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected an integer, got \"" + text + "\"");
  }
  return value;
}

cplx parse_complex(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError(key, "expected \"re,im\", got \"" + text + "\"");
  return {parse_real(key, parts[0]), parse_real(key, parts[1])};
}

// "64", "8,16,24" or "start:stop:step"
std::vector<int> parse_n_values(const std::string& key, const std::string& text) {
  std::vector<int> values;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(key, "range must be start:stop:step");
    const int start = parse_int(key, parts[0]);
    const int stop = parse_int(key, parts[1]);
    const int step = parse_int(key, parts[2]);
    if (step <= 0 || stop < start) throw ConfigError(key, "range must be increasing");
    for (int n = start; n <= stop; n += step) values.push_back(n);
  } else {
    for (const auto& p : split(text, ',')) values.push_back(parse_int(key, p));
  }
  return values;
}

std::string render_complex(cplx z) {
  return format_double(z.real()) + "," + format_double(z.imag());
}

enum class Command { Solve, Sweep, Field, Streamlines };

struct Overrides {
  std::string config_path;
  std::optional<std::string> n, q, omega1, omega2, out;
};

void print_solution_summary(const MfsSolution& sol, std::ostream& out) {
  out << "N = " << sol.size() << '\n';
  out << "epsilon = " << format_double(boundary_residual(sol)) << '\n';
  out << "condition = " << format_double(sol.condition_estimate) << '\n';
  out << "C = " << format_double(sol.stream_constant) << '\n';
}

void execute(Command cmd, const RunConfig& config, std::ostream& out) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoFailure("cannot create " + config.output_dir.string() + ": " + ec.message());

  switch (cmd) {
    case Command::Solve: {
      const MfsSolution sol = solve(config.problem());
      const auto path = config.output_dir / "solution.txt";
      write_solution(sol, path);
      print_solution_summary(sol, out);
      out << "solution = " << path.string() << '\n';
      break;
    }
    case Command::Sweep: {
      const auto records = sweep_N(config.problem(config.n_values.front()), config.n_values);
      const auto path = config.output_dir / "convergence.csv";
      write_convergence_csv(records, path);
      for (const auto& r : records) {
        out << "N = " << r.n_charges << "  epsilon = " << format_double(r.epsilon)
            << "  cond = " << format_double(r.condition_estimate);
        if (!r.ok()) out << "  failed: " << r.failure;
        out << '\n';
      }
      const DecayFit fit = fit_decay_rate(records);
      out << "convergence = " << path.string() << '\n';
      out << "fit range = " << fit.fit_range.first << ".." << fit.fit_range.second << " ("
          << fit.points << " points)\n";
      out << "rate = " << format_double(fit.rate) << '\n';
      break;
    }
    case Command::Field: {
      const MfsSolution sol = solve(config.problem());
      const auto samples = sample_grid(sol, config.scaled_window(), config.grid_nx, config.grid_ny);
      const auto path = config.output_dir / "field.csv";
      write_field_csv(samples, path);
      print_solution_summary(sol, out);
      out << "field = " << path.string() << '\n';
      break;
    }
    case Command::Streamlines: {
      const MfsSolution sol = solve(config.problem());
      const auto lines = trace_streamlines(sol, config.scaled_window(), config.streamlines);
      write_streamlines(lines, config.output_dir);
      print_solution_summary(sol, out);
      out << "streamlines = " << (config.output_dir / "streamlines.csv").string() << '\n';
      break;
    }
  }
}

}  // namespace

Window RunConfig::scaled_window() const {
  if (window) {
    return {window->xmin * radius, window->xmax * radius, window->ymin * radius,
            window->ymax * radius};
  }
  const double half = std::max(std::abs(omega1), std::abs(omega2)) * radius;
  return {-half, half, -half, half};
}

ProblemSpec RunConfig::problem() const {
  return problem(*std::max_element(n_values.begin(), n_values.end()));
}

ProblemSpec RunConfig::problem(int n_charges) const {
  ProblemSpec spec{Latticed(scaled_omega1(), scaled_omega2()), Obstacle::circle(radius),
                   flow_speed, n_charges, q};
  try {
    spec.validate();
  } catch (const InvalidSpec& e) {
    throw ConfigError("radius", e.what());
  }
  return spec;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "omega1") {
    config.omega1 = parse_complex(key, value);
  } else if (key == "omega2") {
    config.omega2 = parse_complex(key, value);
  } else if (key == "radius") {
    config.radius = parse_real(key, value);
  } else if (key == "U") {
    config.flow_speed = parse_real(key, value);
  } else if (key == "q") {
    config.q = parse_real(key, value);
  } else if (key == "N") {
    config.n_values = parse_n_values(key, value);
  } else if (key == "output_dir") {
    if (trim(value).empty()) throw ConfigError(key, "must not be empty");
    config.output_dir = trim(value);
  } else if (key == "grid_nx") {
    config.grid_nx = parse_int(key, value);
  } else if (key == "grid_ny") {
    config.grid_ny = parse_int(key, value);
  } else if (key == "window") {
    const auto parts = split(value, ',');
    if (parts.size() != 4) throw ConfigError(key, "expected \"xmin,xmax,ymin,ymax\"");
    config.window = Window{parse_real(key, parts[0]), parse_real(key, parts[1]),
                           parse_real(key, parts[2]), parse_real(key, parts[3])};
  } else if (key == "streamlines") {
    config.streamlines = parse_int(key, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(content, "line " + std::to_string(line_no) + " is not \"key = value\"");
    }
    apply_setting(config, trim(content.substr(0, eq)), trim(content.substr(eq + 1)));
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  return parse_config(in);
}

void validate(const RunConfig& config) {
  if (!(config.radius > 0.0)) throw ConfigError("radius", "must be positive");
  if (!(config.flow_speed > 0.0)) throw ConfigError("U", "must be positive");
  if (!(config.q > 0.0 && config.q < 1.0)) throw ConfigError("q", "must lie in (0, 1)");
  if (config.n_values.empty()) throw ConfigError("N", "must list at least one value");
  for (std::size_t i = 0; i < config.n_values.size(); ++i) {
    if (config.n_values[i] < 4) throw ConfigError("N", "every value must be at least 4");
    if (i > 0 && config.n_values[i] <= config.n_values[i - 1]) {
      throw ConfigError("N", "values must be strictly increasing");
    }
  }
  if (config.grid_nx < 2) throw ConfigError("grid_nx", "must be at least 2");
  if (config.grid_ny < 2) throw ConfigError("grid_ny", "must be at least 2");
  if (config.streamlines < 1) throw ConfigError("streamlines", "must be at least 1");
  if (config.window &&
      (!(config.window->xmax > config.window->xmin) || !(config.window->ymax > config.window->ymin))) {
    throw ConfigError("window", "must have positive extent");
  }
}

std::string render(const RunConfig& config) {
  std::ostringstream out;
  out << "omega1 = " << render_complex(config.omega1) << '\n';
  out << "omega2 = " << render_complex(config.omega2) << '\n';
  out << "radius = " << format_double(config.radius) << '\n';
  out << "U = " << format_double(config.flow_speed) << '\n';
  out << "q = " << format_double(config.q) << '\n';
  out << "N = ";
  for (std::size_t i = 0; i < config.n_values.size(); ++i) {
    out << (i ? "," : "") << config.n_values[i];
  }
  out << '\n';
  out << "output_dir = " << config.output_dir.string() << '\n';
  out << "grid_nx = " << config.grid_nx << '\n';
  out << "grid_ny = " << config.grid_ny << '\n';
  if (config.window) {
    out << "window = " << format_double(config.window->xmin) << ','
        << format_double(config.window->xmax) << ',' << format_double(config.window->ymin)
        << ',' << format_double(config.window->ymax) << '\n';
  }
  out << "streamlines = " << config.streamlines << '\n';
  return out.str();
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Potential flow past doubly-periodic obstacle arrays"};
  app.name("ellipt-flow");
  app.require_subcommand(1, 1);
  Overrides ov;

  auto add_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", ov.config_path, "Run configuration file")->required();
    sub->add_option("--N", ov.n, "Charge count, list or start:stop:step");
    sub->add_option("--q", ov.q, "Charge placement ratio");
    sub->add_option("--omega1", ov.omega1, "First period as re,im (units of r)");
    sub->add_option("--omega2", ov.omega2, "Second period as re,im (units of r)");
    sub->add_option("--out", ov.out, "Output directory");
    return sub;
  };
  CLI::App* solve_cmd = add_command("solve", "Solve one configuration and write the solution");
  CLI::App* sweep_cmd = add_command("sweep", "Convergence sweep over N with decay-rate fit");
  CLI::App* field_cmd = add_command("field", "Sample velocity and stream function on a grid");
  CLI::App* lines_cmd = add_command("streamlines", "Trace streamlines across the window");

  std::vector<const char*> argv{"ellipt-flow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  Command cmd = Command::Solve;
  if (sweep_cmd->parsed()) cmd = Command::Sweep;
  if (field_cmd->parsed()) cmd = Command::Field;
  if (lines_cmd->parsed()) cmd = Command::Streamlines;
  (void)solve_cmd;

  try {
    RunConfig config = load_config(ov.config_path);
    if (ov.n) apply_setting(config, "N", *ov.n);
    if (ov.q) apply_setting(config, "q", *ov.q);
    if (ov.omega1) apply_setting(config, "omega1", *ov.omega1);
    if (ov.omega2) apply_setting(config, "omega2", *ov.omega2);
    if (ov.out) apply_setting(config, "output_dir", *ov.out);
    validate(config);
    out << "# effective configuration\n" << render(config) << "# end configuration\n";
    execute(cmd, config, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ellipt::cli

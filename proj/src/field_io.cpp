#include "ellipt/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ellipt/detail/parallel.hpp"
#include "ellipt/errors.hpp"

namespace ellipt {

namespace {

// Folded copies of z around the obstacle centroid: the reduced-cell image and
// its eight neighbours. The obstacle fits inside one cell, so one of these is
// the relevant translate whenever z is near any copy of the obstacle.
template <typename F>
void for_each_translate(const MfsSolution& sol, cplx z, F&& f) {
  const Latticed& lat = sol.lattice();
  const cplx centre = sol.obstacle.centroid();
  const auto folded = lat.fold(z - centre);
  const auto [a, b] = lat.reduced_basis();
  for (int m = -1; m <= 1; ++m) {
    for (int n = -1; n <= 1; ++n) {
      f(centre + folded.point + double(m) * a + double(n) * b);
    }
  }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  return out;
}

void check_stream(const std::ostream& out, const std::string& what) {
  if (!out) throw IoFailure("write failed: " + what);
}

std::string format17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

class SolutionReader {
 public:
  explicit SolutionReader(std::istream& in) : in_(in) {}

  std::string next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return line;
    }
    throw FormatError(line_no_ + 1, "unexpected end of file");
  }

  // "key value..." line; returns the value tokens.
  std::istringstream keyed(const std::string& key) {
    const std::string line = next_line();
    std::istringstream ss(line);
    std::string k;
    ss >> k;
    if (k != key) fail("expected \"" + key + "\", found \"" + k + "\"");
    return ss;
  }

  double real_value(const std::string& key) {
    auto ss = keyed(key);
    return parse_real(ss);
  }

  cplx complex_value(const std::string& key) {
    auto ss = keyed(key);
    const double re = parse_real(ss);
    const double im = parse_real(ss);
    return {re, im};
  }

  double parse_real(std::istringstream& ss) {
    std::string tok;
    if (!(ss >> tok)) fail("missing number");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad number \"" + tok + "\"");
    return value;
  }

  void expect(const std::string& text) {
    const std::string line = next_line();
    if (line != text) fail("expected \"" + text + "\"");
  }

  std::vector<cplx> points(std::size_t n) {
    std::vector<cplx> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::istringstream ss(next_line());
      const double re = parse_real(ss);
      const double im = parse_real(ss);
      out.emplace_back(re, im);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(line_no_, what); }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

bool inside_obstacle(const MfsSolution& sol, cplx z) {
  bool inside = false;
  for_each_translate(sol, z, [&](cplx p) { inside = inside || sol.obstacle.contains(p); });
  if (inside) return true;
  const double radius = sol.context.singular_radius();
  for (const cplx zeta : sol.layout.charge_points) {
    if (std::abs(sol.lattice().fold(z - zeta).point) <= radius) return true;
  }
  return false;
}

double distance_to_obstacle(const MfsSolution& sol, cplx z) {
  double best = std::numeric_limits<double>::infinity();
  for_each_translate(sol, z, [&](cplx p) { best = std::min(best, sol.obstacle.distance(p)); });
  return best;
}

std::vector<FieldSample> sample_grid(const MfsSolution& sol, const Window& window, int nx,
                                     int ny) {
  if (nx < 2 || ny < 2) throw InvalidSpec("grid needs nx, ny >= 2");
  if (!(window.xmax > window.xmin) || !(window.ymax > window.ymin)) {
    throw InvalidSpec("window must have positive extent");
  }
  const auto count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  std::vector<FieldSample> samples(count);
  const double dx = (window.xmax - window.xmin) / (nx - 1);
  const double dy = (window.ymax - window.ymin) / (ny - 1);
  detail::parallel_for(count, [&](std::size_t k) {
    const auto ix = static_cast<int>(k % static_cast<std::size_t>(nx));
    const auto iy = static_cast<int>(k / static_cast<std::size_t>(nx));
    FieldSample& s = samples[k];
    s.x = ix == nx - 1 ? window.xmax : window.xmin + ix * dx;
    s.y = iy == ny - 1 ? window.ymax : window.ymin + iy * dy;
    const cplx z(s.x, s.y);
    s.inside_obstacle = inside_obstacle(sol, z);
    if (s.inside_obstacle) {
      s.u = s.v = s.psi = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const Velocity vel = velocity(sol, z);
    s.u = vel.u;
    s.v = vel.v;
    s.psi = stream_function(sol, z);
  });
  return samples;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw IoFailure("number formatting failed");
  return std::string(buf, ptr);
}

void write_field_csv(std::span<const FieldSample> samples, std::ostream& out) {
  out << kFieldCsvHeader << '\n';
  for (const auto& s : samples) {
    out << format_double(s.x) << ',' << format_double(s.y) << ',' << format_double(s.u) << ','
        << format_double(s.v) << ',' << format_double(s.psi) << ','
        << (s.inside_obstacle ? 1 : 0) << '\n';
  }
  check_stream(out, "field csv");
}

void write_field_csv(std::span<const FieldSample> samples, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_field_csv(samples, out);
}

void write_convergence_csv(std::span<const ConvergenceRecord> records, std::ostream& out) {
  out << kConvergenceCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.n_charges << ',' << format_double(r.epsilon) << ','
        << format_double(r.condition_estimate) << ',' << format_double(r.wall_time) << '\n';
  }
  check_stream(out, "convergence csv");
}

void write_convergence_csv(std::span<const ConvergenceRecord> records,
                           const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_convergence_csv(records, out);
}

void write_solution(const MfsSolution& sol, std::ostream& out) {
  if (!sol.obstacle.is_circle() || sol.obstacle.centroid() != cplx(0.0)) {
    throw InvalidSpec("only origin-centred circular obstacles can be serialized");
  }
  const auto& lat = sol.lattice();
  auto put_complex = [&](cplx z) { out << format17(z.real()) << ' ' << format17(z.imag()); };
  out << kSolutionMagic << '\n';
  out << "omega1 ";
  put_complex(lat.omega1());
  out << "\nomega2 ";
  put_complex(lat.omega2());
  out << "\nU " << format17(sol.flow_speed) << '\n';
  out << "r " << format17(sol.obstacle.radius()) << '\n';
  out << "q " << format17(sol.placement_ratio) << '\n';
  out << "N " << sol.size() << '\n';
  out << "C " << format17(sol.stream_constant) << '\n';
  out << "condition " << format17(sol.condition_estimate) << '\n';
  out << "method " << (sol.method == SolveMethod::PartialPivotLu ? "lu" : "cod") << '\n';
  out << "charge_points\n";
  for (const cplx z : sol.layout.charge_points) {
    put_complex(z);
    out << '\n';
  }
  out << "collocation_points\n";
  for (const cplx z : sol.layout.collocation_points) {
    put_complex(z);
    out << '\n';
  }
  out << "charges\n";
  for (const double q : sol.charges) out << format17(q) << '\n';
  out << "end\n";
  check_stream(out, "solution");
}

void write_solution(const MfsSolution& sol, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_solution(sol, out);
}

MfsSolution read_solution(std::istream& in) {
  SolutionReader reader(in);
  if (reader.next_line() != kSolutionMagic) {
    reader.fail(std::string("missing header \"") + kSolutionMagic + "\"");
  }
  const cplx omega1 = reader.complex_value("omega1");
  const cplx omega2 = reader.complex_value("omega2");
  const double flow_speed = reader.real_value("U");
  const double radius = reader.real_value("r");
  const double q = reader.real_value("q");
  const double n_real = reader.real_value("N");
  if (!(n_real >= 1.0) || n_real != std::floor(n_real) || n_real > 1e7) {
    reader.fail("N must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(n_real);
  const double c = reader.real_value("C");
  const double condition = reader.real_value("condition");
  std::string method_name;
  reader.keyed("method") >> method_name;
  SolveMethod method;
  if (method_name == "lu") {
    method = SolveMethod::PartialPivotLu;
  } else if (method_name == "cod") {
    method = SolveMethod::CompleteOrthogonal;
  } else {
    reader.fail("unknown method \"" + method_name + "\"");
  }
  reader.expect("charge_points");
  ChargeLayout layout;
  layout.charge_points = reader.points(n);
  reader.expect("collocation_points");
  layout.collocation_points = reader.points(n);
  reader.expect("charges");
  std::vector<double> charges;
  charges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::istringstream ss(reader.next_line());
    charges.push_back(reader.parse_real(ss));
  }
  reader.expect("end");

  const std::size_t header_line = 2;
  try {
    EllipticContextd ctx{Latticed(omega1, omega2)};
    return make_solution(std::move(ctx), std::move(layout), Obstacle::circle(radius),
                         flow_speed, q, std::move(charges), c, condition, method);
  } catch (const Error& e) {
    throw FormatError(header_line, e.what());
  }
}

MfsSolution read_solution(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return read_solution(in);
}

}  // namespace ellipt

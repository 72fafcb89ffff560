#include "coldplasma/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

namespace coldplasma {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

RiemannProblem RunConfig::problem() const {
  return RiemannProblem::make({n_minus, v_minus0, e_minus0, phi0}, {n_plus, v_plus0, e_plus0, phi0}, phi0);
}

double RunConfig::effective_horizon() const { return horizon ? *horizon : default_horizon(problem()); }

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

[[noreturn]] void config_error(const std::string& key, int line, const std::string& what) {
  throw SolverError(ErrorKind::InvalidInput, "config line " + std::to_string(line) + ", key '" + key + "': " + what);
}

constexpr std::array<std::string_view, 6> kRequired{"n_minus", "n_plus", "v_minus0", "v_plus0", "e_minus0", "e_plus0"};

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw SolverError(ErrorKind::InvalidInput,
                        "config line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                            std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view raw = trim(line.substr(eq + 1));
    if (key.empty()) config_error(key, line_no, "missing key");
    if (seen.count(key)) config_error(key, line_no, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    seen[key] = line_no;

    if (key == "out_dir") {
      if (raw.empty()) config_error(key, line_no, "empty path");
      cfg.out_dir = std::string(raw);
      continue;
    }
    const auto value = to_double(raw);
    if (!value) config_error(key, line_no, "'" + std::string(raw) + "' is not a finite number");
    const double v = *value;
    const auto positive = [&] {
      if (!(v > 0.0)) config_error(key, line_no, "must be positive");
    };
    const auto integral = [&] {
      if (v != std::floor(v) || std::abs(v) > 1e9) config_error(key, line_no, "must be an integer");
    };
    SolverSettings& s = cfg.settings;
    if (key == "n_minus") positive(), cfg.n_minus = v;
    else if (key == "n_plus") positive(), cfg.n_plus = v;
    else if (key == "v_minus0") cfg.v_minus0 = v;
    else if (key == "v_plus0") cfg.v_plus0 = v;
    else if (key == "e_minus0") cfg.e_minus0 = v;
    else if (key == "e_plus0") cfg.e_plus0 = v;
    else if (key == "phi0") cfg.phi0 = v;
    else if (key == "horizon") positive(), cfg.horizon = v;
    else if (key == "root_tol") positive(), s.root_tol = v;
    else if (key == "ode_rel_tol") positive(), s.ode_rel_tol = v;
    else if (key == "ode_abs_tol") positive(), s.ode_abs_tol = v;
    else if (key == "max_step") positive(), s.max_step = v;
    else if (key == "shoot_tol") positive(), s.shoot_tol = v;
    else if (key == "shoot_max_iter") positive(), integral(), s.shoot_max_iter = static_cast<int>(v);
    else if (key == "event_refine_tol") positive(), s.event_refine_tol = v;
    else if (key == "degeneracy_eps") positive(), s.degeneracy_eps = v;
    else if (key == "bracket_grid") positive(), integral(), s.bracket_grid = static_cast<int>(v);
    else config_error(key, line_no, "unknown key");
  }

  std::string missing;
  for (std::string_view k : kRequired) {
    if (!seen.count(std::string(k))) missing += (missing.empty() ? "" : ", ") + std::string(k);
  }
  if (!missing.empty()) throw SolverError(ErrorKind::InvalidInput, "config is missing required keys: " + missing);
  cfg.settings.validate();
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SolverError(ErrorKind::InvalidInput, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// Tabular export

std::vector<SeriesRow> series_rows(const Timeline& tl) {
  std::vector<SeriesRow> rows;
  for (const Segment& s : tl.segments) {
    for (const InterfacePoint& q : s.points) {
      rows.push_back({q.t, q.phi, q.dphi, q.e, trajectory_at(tl.problem.left, q.t),
                      trajectory_at(tl.problem.right, q.t), s.kind});
    }
  }
  return rows;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(double v, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.000" || s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

}  // namespace

std::string write_series_csv(const std::vector<SeriesRow>& rows) {
  std::string out = "t,phi,dphi,e,x_minus,x_plus,segment_kind\n";
  for (const SeriesRow& r : rows) {
    for (double v : {r.t, r.phi, r.dphi, r.e, r.x_minus, r.x_plus}) out += fmt17(v) + ',';
    out += to_string(r.segment_kind);
    out += '\n';
  }
  return out;
}

std::vector<SeriesRow> parse_series_csv(std::string_view text) {
  std::vector<SeriesRow> rows;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (++line_no == 1 || line.empty()) continue;
    std::vector<std::string_view> cells;
    for (std::size_t pos = 0;;) {
      const auto comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    const auto bad = [&] {
      throw SolverError(ErrorKind::InvalidInput, "malformed series row at line " + std::to_string(line_no));
    };
    if (cells.size() != 7) bad();
    SeriesRow r;
    double* fields[] = {&r.t, &r.phi, &r.dphi, &r.e, &r.x_minus, &r.x_plus};
    for (int i = 0; i < 6; ++i) {
      const auto v = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), *fields[i]);
      if (v.ec != std::errc() || v.ptr != cells[i].data() + cells[i].size()) bad();
    }
    const auto kind = segment_kind_from_string(cells[6]);
    if (!kind) bad();
    r.segment_kind = *kind;
    rows.push_back(r);
  }
  return rows;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json diagnostic_json(const Diagnostic& d) {
  json state = json::array();
  for (double v : d.state) state.push_back(number_or_null(v));
  return {{"kind", to_string(d.kind)}, {"message", d.message}, {"t", number_or_null(d.t)}, {"state", state}};
}

json side_json(const SideData& s) { return {{"n", s.n}, {"V0", s.V0}, {"E0", s.E0}}; }

}  // namespace

json report_json(const ValidationReport& rep) {
  json segs = json::array();
  for (const SegmentReport& r : rep.segments) {
    segs.push_back({{"index", r.index},
                    {"kind", to_string(r.kind)},
                    {"complete", r.complete},
                    {"r1_max", number_or_null(r.r1_max)},
                    {"r2_max", number_or_null(r.r2_max)},
                    {"admissibility_violations", r.admissibility_violations},
                    {"max_cone_excess", r.max_cone_excess},
                    {"negative_e", r.negative_e},
                    {"min_e", r.min_e},
                    {"min_margin", r.min_margin}});
  }
  json switches = json::array();
  for (const SwitchAmplitude& s : rep.switches) {
    switches.push_back({{"t", s.t}, {"e", number_or_null(s.e)}, {"jump", number_or_null(s.jump)}});
  }
  const double worst_period =
      rep.periodic_mismatch.empty() ? 0.0 : *std::max_element(rep.periodic_mismatch.begin(), rep.periodic_mismatch.end());
  return {{"segments", segs},
          {"abutment_gaps", rep.abutment_gaps},
          {"switches", switches},
          {"periodic_mismatch_max", worst_period},
          {"periodic_samples", rep.periodic_mismatch.size()},
          {"violations", rep.violations},
          {"hard_violation", rep.hard_violation()}};
}

json timeline_json(const Timeline& tl, const ValidationReport& rep) {
  json segs = json::array();
  for (const Segment& s : tl.segments) {
    json pts = json::array();
    for (const InterfacePoint& q : s.points) pts.push_back({q.t, q.phi, q.dphi, q.e});
    json diags = json::array();
    for (const Diagnostic& d : s.diagnostics) diags.push_back(diagnostic_json(d));
    segs.push_back({{"kind", to_string(s.kind)},
                    {"t_start", s.t_start},
                    {"t_end", s.t_end},
                    {"complete", s.complete},
                    {"entry_event", s.entry_event},
                    {"exit_event", s.exit_event},
                    {"entry_slope", number_or_null(s.entry_slope)},
                    {"fan", s.fan ? json{{"t_open", s.fan->t_open}, {"duration", s.fan->duration}} : json(nullptr)},
                    {"points", pts},
                    {"diagnostics", diags}});
  }
  json events = json::array();
  for (const TimelineEvent& e : tl.events) {
    json ev{{"t", e.t}, {"kind", to_string(e.kind)}};
    ev["side"] = e.side ? json(*e.side == Side::Plus ? "plus" : "minus") : json(nullptr);
    events.push_back(ev);
  }
  json intervals = json::array();
  for (const Interval& iv : tl.intervals) {
    intervals.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}, {"kind", to_string(iv.kind)}});
  }
  json notes = json::array();
  for (const Diagnostic& d : tl.notes) notes.push_back(diagnostic_json(d));
  return {{"problem",
           {{"minus", side_json(tl.problem.left)}, {"plus", side_json(tl.problem.right)}, {"phi0", tl.problem.phi0}}},
          {"horizon", tl.horizon},
          {"intervals", intervals},
          {"segments", segs},
          {"events", events},
          {"period", tl.period ? json(*tl.period) : json(nullptr)},
          {"notes", notes},
          {"validation", report_json(rep)}};
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 44.0;

struct Frame {
  double t0, t1, x0, x1;
  double px(double t) const { return kLeft + (t - t0) / (t1 - t0) * (kWidth - kLeft - kRight); }
  double py(double x) const { return kHeight - kBottom - (x - x0) / (x1 - x0) * (kHeight - kTop - kBottom); }
};

std::string point(const Frame& f, double t, double x) { return fmt(f.px(t), 2) + ',' + fmt(f.py(x), 2); }

/// Polyline path of a function of t on [a, b], sampled uniformly.
std::string curve_path(const Frame& f, const std::function<double(double)>& x, double a, double b, int n) {
  std::string d;
  for (int i = 0; i <= n; ++i) {
    const double t = a + (b - a) * i / n;
    d += (i == 0 ? "M" : " L") + point(f, t, x(t));
  }
  return d;
}

}  // namespace

std::string render_characteristic_plane(const Timeline& tl, const RiemannProblem& p, const RenderStyle& style) {
  const double horizon = tl.horizon > 0.0 ? tl.horizon : default_horizon(p);
  const int n = std::max(style.samples_per_curve, 8);

  // Vertical extent from the two trajectories and the interface.
  double lo = p.phi0;
  double hi = p.phi0;
  for (int i = 0; i <= n; ++i) {
    const double t = horizon * i / n;
    for (double x : {trajectory_at(p.left, t), trajectory_at(p.right, t)}) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const double core = std::max(hi - lo, 1e-6);
  lo -= 0.35 * core;
  hi += 0.35 * core;
  const Frame f{0.0, horizon, lo, hi};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n"
      << "<defs><clipPath id=\"plot-area\"><rect x=\"" << fmt(kLeft, 2) << "\" y=\"" << fmt(kTop, 2)
      << "\" width=\"" << fmt(kWidth - kLeft - kRight, 2) << "\" height=\"" << fmt(kHeight - kTop - kBottom, 2)
      << "\"/></clipPath></defs>\n";

  // Rarefaction regions between x- and x+.
  svg << "<g id=\"rarefaction-regions\" clip-path=\"url(#plot-area)\">\n";
  for (const Interval& iv : tl.intervals) {
    if (iv.kind != IntervalKind::Rarefaction || iv.t_start >= horizon) continue;
    const double b = std::min(iv.t_end, horizon);
    std::string d;
    for (int i = 0; i <= n; ++i) {
      const double t = iv.t_start + (b - iv.t_start) * i / n;
      d += (i == 0 ? "M" : " L") + point(f, t, trajectory_at(p.left, t));
    }
    for (int i = n; i >= 0; --i) {
      const double t = iv.t_start + (b - iv.t_start) * i / n;
      d += " L" + point(f, t, trajectory_at(p.right, t));
    }
    svg << "<path class=\"rarefaction\" d=\"" << d << " Z\" fill=\"" << style.fan_fill
        << "\" stroke=\"none\"/>\n";
  }
  svg << "</g>\n";

  // Characteristic families: the same trajectory shape shifted in x.
  const int m = std::max(style.characteristics_per_family, 1);
  const double spacing = (hi - lo) / m;
  const auto family = [&](const char* id, const SideData& side, double sign, const std::string& color) {
    svg << "<g id=\"" << id << "\" clip-path=\"url(#plot-area)\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"0.8\">\n";
    for (int k = 0; k <= m; ++k) {
      const double shift = sign * spacing * k;
      svg << "<path class=\"characteristic\" d=\""
          << curve_path(f, [&](double t) { return trajectory_at(side, t) + shift; }, 0.0, horizon, n) << "\"/>\n";
    }
    svg << "</g>\n";
  };
  family("characteristics-minus", p.left, -1.0, style.minus_color);
  family("characteristics-plus", p.right, +1.0, style.plus_color);

  // Interface.
  std::string d;
  for (const Segment& s : tl.segments) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      d += (i == 0 ? (d.empty() ? "M" : " M") : " L") + point(f, s.points[i].t, s.points[i].phi);
    }
  }
  if (!d.empty()) {
    svg << "<path id=\"interface\" clip-path=\"url(#plot-area)\" d=\"" << d << "\" fill=\"none\" stroke=\""
        << style.interface_color << "\" stroke-width=\"2\"/>\n";
  }

  // Event markers.
  svg << "<g id=\"events\">\n";
  for (const TimelineEvent& ev : tl.events) {
    const SideData& host = ev.side ? p.side(*ev.side) : p.left;
    svg << "<circle class=\"event-marker " << to_string(ev.kind) << "\" data-t=\"" << fmt17(ev.t) << "\" cx=\""
        << fmt(f.px(ev.t), 2) << "\" cy=\"" << fmt(f.py(trajectory_at(host, ev.t)), 2)
        << "\" r=\"4\" fill=\"#000000\"/>\n";
  }
  svg << "</g>\n";

  // Axes with ticks.
  const double ax = kLeft;
  const double ay = kHeight - kBottom;
  svg << "<g id=\"axes\" stroke=\"#000000\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<line x1=\"" << fmt(ax, 2) << "\" y1=\"" << fmt(ay, 2) << "\" x2=\"" << fmt(kWidth - kRight, 2)
      << "\" y2=\"" << fmt(ay, 2) << "\"/>\n"
      << "<line x1=\"" << fmt(ax, 2) << "\" y1=\"" << fmt(kTop, 2) << "\" x2=\"" << fmt(ax, 2) << "\" y2=\""
      << fmt(ay, 2) << "\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double t = horizon * k / 5;
    const double x = lo + (hi - lo) * k / 5;
    svg << "<line x1=\"" << fmt(f.px(t), 2) << "\" y1=\"" << fmt(ay, 2) << "\" x2=\"" << fmt(f.px(t), 2)
        << "\" y2=\"" << fmt(ay + 5, 2) << "\"/>\n"
        << "<text stroke=\"none\" x=\"" << fmt(f.px(t), 2) << "\" y=\"" << fmt(ay + 18, 2)
        << "\" text-anchor=\"middle\">" << fmt(t, 2) << "</text>\n"
        << "<line x1=\"" << fmt(ax - 5, 2) << "\" y1=\"" << fmt(f.py(x), 2) << "\" x2=\"" << fmt(ax, 2)
        << "\" y2=\"" << fmt(f.py(x), 2) << "\"/>\n"
        << "<text stroke=\"none\" x=\"" << fmt(ax - 8, 2) << "\" y=\"" << fmt(f.py(x) + 4, 2)
        << "\" text-anchor=\"end\">" << fmt(x, 2) << "</text>\n";
  }
  svg << "<text stroke=\"none\" x=\"" << fmt(kWidth - kRight, 2) << "\" y=\"" << fmt(kHeight - 6, 2)
      << "\" text-anchor=\"end\">t</text>\n"
      << "<text stroke=\"none\" x=\"14\" y=\"" << fmt(kTop + 10, 2) << "\">x</text>\n"
      << "</g>\n</svg>\n";
  return svg.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SolverError(ErrorKind::InvalidInput, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw SolverError(ErrorKind::InvalidInput, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Driver

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  double horizon = 0.0;
  std::string format = "csv";
};

bool is_stall(ErrorKind k) {
  return k == ErrorKind::Degeneracy || k == ErrorKind::BoundarySingularity || k == ErrorKind::DegenerateB ||
         k == ErrorKind::ConditionViolated;
}

/// 0 when every segment completed, 3 when one stalled on a degeneracy, 2 otherwise.
int solve_status(const Timeline& tl) {
  int code = kExitOk;
  for (const Segment& s : tl.segments) {
    if (s.complete) continue;
    const bool stall = std::any_of(s.diagnostics.begin(), s.diagnostics.end(),
                                   [](const Diagnostic& d) { return is_stall(d.kind); });
    code = std::max(code, stall ? int{kExitStall} : int{kExitNoSolution});
  }
  return code;
}

std::string characteristics_table(const RiemannProblem& p, double horizon, const std::string& format) {
  constexpr int kRows = 1000;
  if (format == "json") {
    json rows = json::array();
    for (int i = 0; i <= kRows; ++i) {
      const double t = horizon * i / kRows;
      const SideState m = state_at(p.left, t);
      const SideState q = state_at(p.right, t);
      rows.push_back({{"t", t},
                      {"x_minus", trajectory_at(p.left, t)},
                      {"v_minus", m.V},
                      {"e_minus", m.E},
                      {"x_plus", trajectory_at(p.right, t)},
                      {"v_plus", q.V},
                      {"e_plus", q.E}});
    }
    return rows.dump(2) + "\n";
  }
  std::string out = "t,x_minus,v_minus,e_minus,x_plus,v_plus,e_plus\n";
  for (int i = 0; i <= kRows; ++i) {
    const double t = horizon * i / kRows;
    const SideState m = state_at(p.left, t);
    const SideState q = state_at(p.right, t);
    for (double v : {t, trajectory_at(p.left, t), m.V, m.E, trajectory_at(p.right, t), q.V}) out += fmt17(v) + ',';
    out += fmt17(q.E) + '\n';
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free-boundary Riemann problem for cold plasma with two background densities", "coldplasma"};
  app.require_subcommand(1);
  CommonFlags flags;
  const auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory (default: out_dir from the config)");
    sub->add_option("--horizon", flags.horizon, "time horizon (overrides the config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", flags.format, "tabular format")->check(CLI::IsMember({"csv", "json"}));
  };
  CLI::App* solve = app.add_subcommand("solve", "build the timeline; write series, timeline and report files");
  CLI::App* chars = app.add_subcommand("characteristics", "x, V, E along both trajectories");
  CLI::App* inter = app.add_subcommand("intersections", "intersection times of x- and x+");
  CLI::App* swpts = app.add_subcommand("switch-points", "switching instants inside rarefaction regions");
  CLI::App* valid = app.add_subcommand("validate", "validation report; nonzero exit on any hard violation");
  CLI::App* plot = app.add_subcommand("plot", "SVG of the characteristic plane");
  for (CLI::App* sub : {solve, chars, inter, swpts, valid, plot}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  RunConfig cfg;
  try {
    cfg = load_config(flags.config);
    if (flags.horizon > 0.0) cfg.horizon = flags.horizon;
    if (!flags.out.empty()) cfg.out_dir = flags.out;
    cfg.problem();
  } catch (const SolverError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  const RiemannProblem p = cfg.problem();
  const double horizon = cfg.effective_horizon();
  const SolverSettings& settings = cfg.settings;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = cfg.out_dir / name;
    write_file_atomic(path, content);
    out << "wrote " << path.string() << '\n';
  };

  try {
    if (chars->parsed()) {
      const std::string table = characteristics_table(p, horizon, flags.format);
      if (flags.out.empty()) {
        out << table;
      } else {
        emit(flags.format == "json" ? "characteristics.json" : "characteristics.csv", table);
      }
      return kExitOk;
    }
    if (inter->parsed()) {
      const auto times = intersection_times(p, horizon + 1e-9 * std::max(1.0, horizon), settings);
      if (flags.format == "json") {
        out << json(times).dump() << '\n';
      } else {
        for (double t : times) out << fmt17(t) << '\n';
      }
      return kExitOk;
    }

    classify_initial_regime(p);
    const Timeline tl = build_timeline(p, settings, horizon);

    if (swpts->parsed()) {
      json list = json::array();
      for (const TimelineEvent& ev : tl.events) {
        if (ev.kind != EventKind::Switch) continue;
        const char* side = ev.side && *ev.side == Side::Minus ? "minus" : "plus";
        if (flags.format == "json") {
          list.push_back({{"t", ev.t}, {"side", side}});
        } else {
          out << fmt17(ev.t) << ',' << side << '\n';
        }
      }
      if (flags.format == "json") out << list.dump() << '\n';
      return kExitOk;
    }
    if (plot->parsed()) {
      emit("characteristic_plane.svg", render_characteristic_plane(tl, p));
      return kExitOk;
    }

    const ValidationReport rep = validate_timeline(tl, settings);
    if (valid->parsed()) {
      out << report_json(rep).dump(2) << '\n';
      return rep.hard_violation() ? kExitValidation : kExitOk;
    }

    // solve
    if (flags.format == "json") {
      json rows = json::array();
      for (const SeriesRow& r : series_rows(tl)) {
        rows.push_back({r.t, r.phi, r.dphi, r.e, r.x_minus, r.x_plus, to_string(r.segment_kind)});
      }
      emit("series.json", rows.dump() + "\n");
    } else {
      emit("series.csv", write_series_csv(series_rows(tl)));
    }
    emit("timeline.json", timeline_json(tl, rep).dump(2) + "\n");
    emit("report.json", report_json(rep).dump(2) + "\n");
    const int code = solve_status(tl);
    if (code != kExitOk) err << "timeline is partial; see segment diagnostics in timeline.json\n";
    return code;
  } catch (const SolverError& e) {
    err << "solver error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    if (e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::DegenerateData) return kExitUsage;
    return is_stall(e.kind()) ? kExitStall : kExitNoSolution;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace coldplasma

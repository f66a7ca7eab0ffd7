#include "fusion/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "fusion/rules.hpp"

namespace fusion {

const Source* Scenario::find_source(std::string_view name) const {
  for (const auto& s : sources) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    tokens.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return tokens;
}

std::string trim(std::string_view s) {
  const auto comment = s.find('#');
  if (comment != std::string_view::npos) s = s.substr(0, comment);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_number(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

const std::map<std::string_view, RelationshipCase::Kind>& case_keywords() {
  using K = RelationshipCase::Kind;
  static const std::map<std::string_view, K> table{
      {"keep", K::KeepOnIntersection},   {"pcr5", K::OptimisticBoth},
      {"union", K::OneRightUnknown},     {"pessimistic", K::Pessimistic},
      {"right", K::OneRightKnown},       {"ignorance", K::VeryPessimisticClosed},
      {"empty", K::VeryPessimisticOpen}, {"others", K::BothWrong},
      {"pcr5-nonempty", K::NeitherInterests},
  };
  return table;
}

const std::set<std::string_view>& fuse_rules() {
  static const std::set<std::string_view> rules{
      "conjunctive", "dsm-classic", "disjunctive", "exclusive", "dempster", "yager",
      "tbm",         "dubois-prade", "dsm-hybrid", "pcr5",      "murphy"};
  return rules;
}

std::optional<Renderer::Kind> renderer_kind(std::string_view name) {
  using K = Renderer::Kind;
  for (auto k : {K::DsmClassic, K::Yager, K::Tbm, K::DuboisPrade, K::Dempster, K::DsmHybrid, K::Uft}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

class Parser {
 public:
  Scenario parse(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++line_no;
      line_ = line_no;
      handle(text.substr(start, end - start));
      start = end + 1;
    }
    if (atoms_.empty()) throw ScenarioError(1, 1, "scenario declares no frame");
    finalize_frame();
    return std::move(scenario_);
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw ScenarioError(line_, at.column, msg);
  }

  void expect_count(const std::vector<Token>& t, std::size_t min, std::size_t max,
                    const std::string& usage) const {
    if (t.size() < min || t.size() > max) fail(t.front(), "usage: " + usage);
  }

  SetElement expr(const Token& tok, const FramePtr& frame) const {
    try {
      return parse_expr(tok.text, frame);
    } catch (const ParseError& e) {
      throw ScenarioError(line_, tok.column + e.position(), e.what());
    } catch (const Error& e) {
      fail(tok, e.what());
    }
  }

  double number(const Token& tok) const {
    const auto v = to_number(tok.text);
    if (!v) fail(tok, "expected a number, got '" + tok.text + "'");
    return *v;
  }

  void finalize_frame() {
    if (scenario_.model) return;
    try {
      scenario_.model = Frame::build(atoms_, constraints_, mode_);
    } catch (const Error& e) {
      throw ScenarioError(frame_line_, 1, e.what());
    }
  }

  const FramePtr& free() {
    if (atoms_.empty()) throw ScenarioError(line_, 1, "no frame declared yet");
    finalize_frame();
    free_ = scenario_.model->free_model();
    return free_;
  }

  Source& source(const Token& tok) {
    for (auto& s : scenario_.sources) {
      if (s.name == tok.text) return s;
    }
    fail(tok, "unknown source '" + tok.text + "'");
  }

  void use(const Token& tok, bool crisp_only) {
    auto& s = source(tok);
    if (crisp_only && s.imprecise) fail(tok, "source '" + tok.text + "' has interval masses");
    used_.insert(tok.text);
  }

  void declare_result(const Token& tok) {
    if (scenario_.find_source(tok.text)) fail(tok, "source '" + tok.text + "' already exists");
    Source s;
    s.name = tok.text;
    s.line = line_;
    scenario_.sources.push_back(std::move(s));
    used_.insert(tok.text);
  }

  // Splits a trailing `as <name>` off the operand list.
  std::optional<Token> take_as(std::vector<Token>& operands) const {
    if (operands.size() >= 2 && operands[operands.size() - 2].text == "as") {
      auto name = operands.back();
      operands.resize(operands.size() - 2);
      return name;
    }
    return std::nullopt;
  }

  void handle(std::string_view raw) {
    auto t = tokenize(raw);
    if (t.empty()) return;
    const auto& kw = t.front().text;

    if (kw == "frame") {
      if (!atoms_.empty()) fail(t.front(), "frame already declared");
      expect_count(t, 2, 1 + kMaxAtoms + 1, "frame <atom>...");
      for (std::size_t i = 1; i < t.size(); ++i) atoms_.push_back(t[i].text);
      frame_line_ = line_;
      try {
        Frame::build(atoms_, {}, mode_);
      } catch (const Error& e) {
        fail(t.front(), e.what());
      }
      return;
    }
    if (kw == "mode" || kw == "constraint") {
      if (scenario_.model) fail(t.front(), "'" + kw + "' must precede sources and commands");
      if (kw == "mode") {
        expect_count(t, 2, 2, "mode superpower|hyperpower|power");
        if (t[1].text == "superpower") mode_ = ClosureMode::SuperPowerSet;
        else if (t[1].text == "hyperpower") mode_ = ClosureMode::HyperPowerSet;
        else if (t[1].text == "power") mode_ = ClosureMode::PowerSet;
        else fail(t[1], "unknown mode '" + t[1].text + "'");
        return;
      }
      if (atoms_.empty()) fail(t.front(), "no frame declared yet");
      expect_count(t, 3, 4, "constraint empty <expr> | constraint subset|equal <expr> <expr>");
      Constraint c;
      if (t[1].text == "empty" && t.size() == 3) c = Constraint::empty(t[2].text);
      else if (t[1].text == "subset" && t.size() == 4) c = Constraint::subset(t[2].text, t[3].text);
      else if (t[1].text == "equal" && t.size() == 4) c = Constraint::equal(t[2].text, t[3].text);
      else fail(t[1], "usage: constraint empty <expr> | constraint subset|equal <expr> <expr>");
      try {
        Frame::build(atoms_, {c}, ClosureMode::SuperPowerSet);
      } catch (const Error& e) {
        fail(t[2], e.what());
      }
      constraints_.push_back(std::move(c));
      return;
    }
    if (kw == "world") {
      expect_count(t, 2, 2, "world closed|open");
      if (t[1].text == "closed") world_ = World::Closed;
      else if (t[1].text == "open") world_ = World::Open;
      else fail(t[1], "expected 'closed' or 'open'");
      spec_.set_world(world_);
      return;
    }
    if (kw == "source") {
      expect_count(t, 2, 2, "source <name>");
      free();
      if (scenario_.find_source(t[1].text)) fail(t[1], "source '" + t[1].text + "' already exists");
      Source s;
      s.name = t[1].text;
      s.line = line_;
      scenario_.sources.push_back(std::move(s));
      return;
    }
    if (kw == "mass" || kw == "imass") {
      expect_count(t, 4, 4, kw + " <source> <expr> <value>");
      const auto& f = free();
      auto& s = source(t[1]);
      if (used_.contains(s.name)) fail(t[1], "source '" + s.name + "' is already used by a command");
      const auto element = expr(t[2], f);
      if (element.is_empty()) fail(t[2], "source masses cannot be placed on EMPTY");
      if (kw == "mass") {
        if (s.imprecise) fail(t[1], "source '" + s.name + "' has interval masses");
        const double v = number(t[3]);
        if (!(v >= 0.0 && v <= 1.0)) fail(t[3], "mass must lie in [0, 1]");
        if (!s.crisp) s.crisp.emplace(f, s.name);
        s.crisp->add(element, v);
      } else {
        if (s.crisp) fail(t[1], "source '" + s.name + "' has crisp masses");
        if (!s.imprecise) s.imprecise.emplace(f, s.name);
        s.imprecise->set(element, intervals(t[3]));
      }
      return;
    }
    if (kw == "case") {
      expect_count(t, 3, 4, "case <expr> <relationship> [<winner>]");
      const auto& f = free();
      const auto cell = expr(t[1], f);
      const auto it = case_keywords().find(t[2].text);
      if (it == case_keywords().end()) fail(t[2], "unknown relationship '" + t[2].text + "'");
      if (it->second == RelationshipCase::Kind::OneRightKnown) {
        if (t.size() != 4) fail(t[2], "usage: case <expr> right <winner>");
        spec_.set(cell, RelationshipCase::right(expr(t[3], f)));
      } else {
        if (t.size() != 3) fail(t[3], "unexpected argument");
        spec_.set(cell, RelationshipCase::of(it->second));
      }
      return;
    }

    // Commands.
    free();
    Command cmd;
    cmd.line = line_;
    cmd.text = trim(raw);
    cmd.world = world_;
    cmd.spec = spec_;
    std::vector<Token> operands(t.begin() + 1, t.end());

    if (kw == "discount") {
      auto as = take_as(operands);
      if (operands.size() != 2) fail(t.front(), "usage: discount <source> <alpha> [as <name>]");
      use(operands[0], true);
      const double alpha = number(operands[1]);
      if (!(alpha >= 0.0 && alpha <= 1.0)) fail(operands[1], "discount factor must lie in [0, 1]");
      if (as) declare_result(*as);
    } else if (kw == "normalize") {
      auto as = take_as(operands);
      if (operands.size() != 1) fail(t.front(), "usage: normalize <source> [as <name>]");
      use(operands[0], false);
      if (as) declare_result(*as);
    } else if (kw == "classify") {
      if (operands.size() != 1) fail(t.front(), "usage: classify <source>");
      use(operands[0], false);
    } else if (kw == "fuse") {
      auto as = take_as(operands);
      if (operands.empty()) fail(t.front(), "usage: fuse <rule> <source>... [as <name>]");
      const auto& rule = operands.front().text;
      if (rule.rfind("mixed:", 0) == 0) {
        try {
          SourceTree::parse(std::string_view(rule).substr(6));
        } catch (const ParseError& e) {
          throw ScenarioError(line_, operands.front().column + 6 + e.position(), e.what());
        }
      } else if (!fuse_rules().contains(rule)) {
        fail(operands.front(), "unknown rule '" + rule + "'");
      }
      for (std::size_t i = 1; i < operands.size(); ++i) use(operands[i], true);
      if (as) declare_result(*as);
    } else if (kw == "bounds") {
      if (operands.size() != 2) fail(t.front(), "usage: bounds <source> <source>");
      for (const auto& o : operands) use(o, true);
    } else if (kw == "uft") {
      auto as = take_as(operands);
      if (operands.empty()) fail(t.front(), "usage: uft <source>... [as <name>]");
      for (const auto& o : operands) use(o, true);
      if (as) declare_result(*as);
    } else if (kw == "dynamic") {
      if (operands.size() >= 2 && operands[operands.size() - 2].text == "->") {
        if (!renderer_kind(operands.back().text)) {
          fail(operands.back(), "unknown renderer '" + operands.back().text + "'");
        }
        operands.resize(operands.size() - 2);
      }
      if (operands.empty()) fail(t.front(), "usage: dynamic <decay> <source>... [-> <renderer>]");
      const double decay = number(operands[0]);
      if (!(decay >= 0.0 && decay <= 1.0)) fail(operands[0], "decay factor must lie in [0, 1]");
      for (std::size_t i = 1; i < operands.size(); ++i) use(operands[i], true);
    } else {
      fail(t.front(), "unknown directive '" + kw + "'");
    }
    cmd.tokens = std::move(t);
    scenario_.commands.push_back(std::move(cmd));
  }

  IntervalSet intervals(const Token& tok) const {
    std::vector<Interval> pieces;
    std::string_view rest = tok.text;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto piece = rest.substr(0, comma);
      const auto dots = piece.find("..");
      if (dots == std::string_view::npos) fail(tok, "expected <lo>..<hi>, got '" + std::string(piece) + "'");
      const auto lo = to_number(piece.substr(0, dots));
      const auto hi = to_number(piece.substr(dots + 2));
      if (!lo || !hi) fail(tok, "malformed interval '" + std::string(piece) + "'");
      pieces.push_back({*lo, *hi});
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    try {
      return IntervalSet(std::move(pieces));
    } catch (const Error& e) {
      fail(tok, e.what());
    }
  }

  Scenario scenario_;
  std::vector<std::string> atoms_;
  std::vector<Constraint> constraints_;
  ClosureMode mode_ = ClosureMode::SuperPowerSet;
  FramePtr free_;
  World world_ = World::Closed;
  RelationshipSpec spec_;
  std::set<std::string> used_;
  std::size_t line_ = 0;
  std::size_t frame_line_ = 1;
};

// ---------------------------------------------------------------------------
// Execution

using Value = std::variant<Bba, ImpreciseBba>;

class Runner {
 public:
  explicit Runner(const Scenario& s) : scenario_(s) {
    for (const auto& src : s.sources) {
      if (src.crisp) values_.emplace(src.name, *src.crisp);
      else if (src.imprecise) values_.emplace(src.name, *src.imprecise);
    }
  }

  Report run() {
    Report report;
    for (const auto& cmd : scenario_.commands) {
      try {
        report.blocks.push_back(execute(cmd));
      } catch (const ScenarioError&) {
        throw;
      } catch (const Error& e) {
        throw ScenarioError(cmd.line, cmd.tokens.front().column, e.what());
      }
    }
    return report;
  }

 private:
  const Value& value(const std::string& name) const {
    const auto it = values_.find(name);
    if (it == values_.end()) throw Error("source '" + name + "' has no masses");
    return it->second;
  }

  Bba crisp(const std::string& name) const {
    const auto& v = value(name);
    if (const auto* b = std::get_if<Bba>(&v)) return *b;
    throw Error("source '" + name + "' has interval masses");
  }

  std::vector<Bba> crisp_free(std::span<const Token> names) const {
    std::vector<Bba> out;
    for (const auto& n : names) out.push_back(project(crisp(n.text), free()));
    return out;
  }

  FramePtr free() const { return scenario_.model->free_model(); }
  const FramePtr& model() const { return scenario_.model; }

  static std::string join_names(std::span<const Token> names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ",") + n.text;
    return out;
  }

  static Row mass_row(std::string label, Bba bba) {
    Row r;
    r.label = std::move(label);
    r.masses = std::move(bba);
    return r;
  }

  static Row text_row(std::string label, std::string text) {
    Row r;
    r.label = std::move(label);
    r.text = std::move(text);
    return r;
  }

  void store(const std::optional<std::string>& as, Value v) {
    if (as) values_.insert_or_assign(*as, std::move(v));
  }

  static std::optional<std::string> split_as(std::vector<Token>& operands) {
    if (operands.size() >= 2 && operands[operands.size() - 2].text == "as") {
      auto name = operands.back().text;
      operands.resize(operands.size() - 2);
      return name;
    }
    return std::nullopt;
  }

  Bba fuse(const std::string& rule, std::span<const Token> names) const {
    auto bbas = crisp_free(names);
    if (rule == "conjunctive") return conjunctive(bbas, model()).flatten();
    if (rule == "dsm-classic") return dsm_classic(bbas);
    if (rule == "disjunctive") return project(disjunctive(bbas), model());
    if (rule == "exclusive") return project(exclusive_disjunctive(bbas), model());
    if (rule == "murphy") return project(murphy_average(bbas), model());
    if (rule.rfind("mixed:", 0) == 0) {
      return project(mixed(bbas, SourceTree::parse(std::string_view(rule).substr(6))), model());
    }
    if (rule == "pcr5") {
      if (bbas.size() != 2) throw Error("pcr5 combines exactly 2 sources");
      return pcr5_pair(bbas[0], bbas[1], model());
    }
    if (rule == "dsm-hybrid") return dsm_hybrid(conjunctive(bbas, model()));
    static const std::map<std::string_view, ConflictStrategy> strategies{
        {"dempster", ConflictStrategy::DempsterNormalize},
        {"yager", ConflictStrategy::YagerToIgnorance},
        {"tbm", ConflictStrategy::TbmToEmpty},
        {"dubois-prade", ConflictStrategy::DuboisPradeToUnion}};
    return transfer_conflict(conjunctive(bbas, model()), strategies.at(rule));
  }

  Block execute(const Command& cmd) {
    Block block;
    block.line = cmd.line;
    block.command = cmd.text;
    const auto& kw = cmd.tokens.front().text;
    std::vector<Token> operands(cmd.tokens.begin() + 1, cmd.tokens.end());
    auto spec = cmd.spec;
    spec.set_world(cmd.world);

    if (kw == "discount") {
      const auto as = split_as(operands);
      const double alpha = *to_number(operands[1].text);
      auto result = discount(crisp(operands[0].text), alpha);
      const auto label = "discount(" + operands[0].text + "," + operands[1].text + ")";
      block.rows.push_back(mass_row(as.value_or(label), result));
      store(as, std::move(result));
    } else if (kw == "normalize") {
      const auto as = split_as(operands);
      const auto label = "normalize(" + operands[0].text + ")";
      const auto& v = value(operands[0].text);
      if (const auto* b = std::get_if<Bba>(&v)) {
        auto result = normalize(*b);
        block.rows.push_back(mass_row(as.value_or(label), result));
        store(as, std::move(result));
      } else {
        auto result = normalize_imprecise(std::get<ImpreciseBba>(v));
        block.rows.push_back(text_row(as.value_or(label), describe(result)));
        store(as, std::move(result));
      }
    } else if (kw == "classify") {
      const auto& v = value(operands[0].text);
      const auto kind = std::holds_alternative<Bba>(v) ? classify(std::get<Bba>(v))
                                                      : classify_imprecise(std::get<ImpreciseBba>(v));
      block.rows.push_back(text_row(operands[0].text, std::string(to_string(kind))));
    } else if (kw == "fuse") {
      const auto as = split_as(operands);
      const auto& rule = operands.front().text;
      const std::span<const Token> names(operands.begin() + 1, operands.end());
      auto result = fuse(rule, names);
      block.rows.push_back(mass_row(as.value_or(rule + "(" + join_names(names) + ")"), result));
      store(as, std::move(result));
    } else if (kw == "uft") {
      const auto as = split_as(operands);
      auto result = uft_combine(crisp_free(operands), model(), spec);
      block.rows.push_back(mass_row(as.value_or("uft(" + join_names(operands) + ")"), result));
      store(as, std::move(result));
    } else if (kw == "bounds") {
      const auto bbas = crisp_free(operands);
      const auto lower = bound(bbas[0], bbas[1], BoundKind::Lower, cmd.world);
      const auto upper = bound(bbas[0], bbas[1], BoundKind::Upper, cmd.world);
      block.rows.push_back(mass_row("lower(" + std::string(to_string(cmd.world)) + ")", lower));
      block.rows.push_back(mass_row("middle", bound(bbas[0], bbas[1], BoundKind::Middle, cmd.world)));
      block.rows.push_back(mass_row("upper", upper));
      block.rows.push_back(mass_row("average", average_bounds(lower, upper)));
      block.rows.push_back(mass_row("upper-gain", upper_bound_gains(bbas[0], bbas[1])));
    } else if (kw == "dynamic") {
      Renderer renderer;
      if (operands.size() >= 2 && operands[operands.size() - 2].text == "->") {
        renderer.kind = *renderer_kind(operands.back().text);
        operands.resize(operands.size() - 2);
      }
      if (renderer.kind == Renderer::Kind::Uft) renderer.spec = spec;
      auto state = FusionState::init(model(), *to_number(operands[0].text));
      const std::span<const Token> names(operands.begin() + 1, operands.end());
      for (const auto& b : crisp_free(names)) state = state.update(b);
      block.rows.push_back(mass_row("dynamic(" + operands[0].text + ";" + join_names(names) + ")->" +
                                        std::string(to_string(renderer.kind)),
                                    state.report(renderer)));
    }
    return block;
  }

  static std::string describe(const ImpreciseBba& b) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [x, v] : b.focal()) {
      out << (first ? "" : " ") << to_string(x) << ":";
      first = false;
      for (std::size_t i = 0; i < v.pieces().size(); ++i) {
        out << (i ? "," : "") << v.pieces()[i].lo << ".." << v.pieces()[i].hi;
      }
    }
    return out.str();
  }

  const Scenario& scenario_;
  std::map<std::string, Value> values_;
};

std::string format_fixed(double v, int precision) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string format_full(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser().parse(text); }

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return parse_scenario(buf.str());
}

Report run(const Scenario& scenario) { return Runner(scenario).run(); }

std::string render_table(const Report& report, int precision) {
  if (precision < 1 || precision > 12) throw Error("precision must lie in 1..12");
  std::ostringstream out;
  bool first_block = true;
  for (const auto& block : report.blocks) {
    if (!first_block) out << '\n';
    first_block = false;
    out << "# line " << block.line << ": " << block.command << '\n';

    std::set<SetElement> columns;
    for (const auto& row : block.rows) {
      if (!row.masses) continue;
      for (const auto& [x, _] : row.masses->focal()) columns.insert(x);
    }
    if (!columns.empty()) {
      out << "row";
      for (const auto& c : columns) out << '\t' << to_string(c);
      out << "\tsum\n";
    }
    for (const auto& row : block.rows) {
      out << row.label;
      if (row.masses) {
        for (const auto& c : columns) out << '\t' << format_fixed(row.masses->mass(c), precision);
        out << '\t' << format_full(row.masses->total());
      } else {
        out << '\t' << row.text;
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace fusion

#include "cbound/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cbound/decide.hpp"
#include "cbound/displacement.hpp"
#include "cbound/error.hpp"
#include "cbound/gvas_text.hpp"
#include "cbound/normalize.hpp"
#include "cbound/oracle.hpp"
#include "cbound/pvas.hpp"
#include "cbound/random_instances.hpp"
#include "cbound/tree_json.hpp"

namespace cbound::cli {

using nlohmann::json;

namespace {

std::string read_text(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// PVAS documents are reduced on the fly.
Gvas load_gvas(const std::string& path, std::istream& in) {
  const auto text = read_text(path, in);
  if (leading_keyword(text) == "pvas") return reduce_to_gvas(parse_pvas(text));
  return parse_gvas(text);
}

json ext_json(const ExtValue& v) {
  if (v.is_finite()) return v.value();
  return v.to_string();
}

std::string set_string(const std::set<Counter>& s) {
  std::string r = "{";
  for (auto it = s.begin(); it != s.end(); ++it) r += (it == s.begin() ? "" : ", ") + std::to_string(*it);
  return r + "}";
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Options {
  std::string input = "-";
  bool json_out = false;
  // decide
  Counter cap = 256;
  Counter oracle_max = 256;
  bool complete = false;
  bool no_pruning = false;
  std::size_t prefix_len = 0;
  // oracle
  Counter max = 64;
  std::string start;
  Counter input_value = -1;
  // witness
  std::string starts;
  // simulate
  Counter max_counter = 64;
  std::size_t max_stack = 16;
  std::size_t max_configs = 100000;
  // verify / rank
  std::string flow_tree;
  std::string certificate;
  std::string gvas_file;
  std::string s_path;
  std::string t_path;
  bool dot = false;
  // gen
  std::string kind = "gvas";
  std::uint64_t seed = 0;
  std::size_t size = 3;
};

int cmd_normalize(const Options& o, std::istream& in, std::ostream& out) {
  out << print_gvas(normalize(load_gvas(o.input, in)).gvas());
  return kOk;
}

int cmd_displacement(const Options& o, std::istream& in, std::ostream& out) {
  const auto ng = normalize(load_gvas(o.input, in));
  const auto table = displacement_table(ng);
  const auto& gr = ng.grammar();
  if (o.json_out) {
    json j = json::object();
    for (NtId x = 0; x < table.size(); ++x) j[gr.name(x)] = ext_json(table[x]);
    out << j.dump(2) << "\n";
  } else {
    for (NtId x = 0; x < table.size(); ++x) out << gr.name(x) << "\t" << table[x].to_string() << "\n";
  }
  return kOk;
}

int cmd_pump(const Options& o, std::istream& in, std::ostream& out) {
  const auto ng = normalize(load_gvas(o.input, in));
  const auto pump = find_positive_pump(ng);
  const auto& gr = ng.grammar();
  if (!pump) {
    if (o.json_out) out << json{{"pump", nullptr}}.dump() << "\n";
    else out << "no positive pump: displacement of " << gr.name(ng.start()) << " is finite\n";
    return kViolation;
  }
  json j{{"anchor", gr.name(pump->anchor)},
         {"gain", pump->gain},
         {"pump", to_json(gr, pump->pump_tree)},
         {"context", to_json(gr, pump->context_tree)}};
  if (o.json_out) {
    out << j.dump(2) << "\n";
  } else {
    out << "anchor " << gr.name(pump->anchor) << "\ngain " << pump->gain << "\npump " << j["pump"].dump()
        << "\ncontext " << j["context"].dump() << "\n";
  }
  return kOk;
}

int cmd_witness(const Options& o, std::istream& in, std::ostream& out) {
  const auto ng = normalize(load_gvas(o.input, in));
  const auto& gr = ng.grammar();
  std::vector<NtId> starts;
  for (const auto& name : split_commas(o.starts)) {
    if (name.empty()) throw Error("--starts: empty nonterminal name");
    starts.push_back(gr.at(name));
  }
  const auto trees = derive_witness(ng, starts);
  json arr = json::array();
  std::int64_t total = 0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto sum = sum_of(yield_of(trees[i]));
    total += sum;
    arr.push_back({{"start", gr.name(starts[i])}, {"sum", sum}, {"size", trees[i].size()}, {"tree", to_json(gr, trees[i])}});
  }
  if (o.json_out) {
    out << json{{"trees", arr}, {"total_sum", total}}.dump(2) << "\n";
  } else {
    for (const auto& t : arr)
      out << t["start"].get<std::string>() << "\tsum " << t["sum"] << "\tsize " << t["size"] << "\t" << t["tree"].dump() << "\n";
    out << "total " << total << "\n";
  }
  return kOk;
}

int cmd_reduce(const Options& o, std::istream& in, std::ostream& out) {
  out << print_gvas(reduce_to_gvas(parse_pvas(read_text(o.input, in))));
  return kOk;
}

int cmd_simulate(const Options& o, std::istream& in, std::ostream& out) {
  const auto p = parse_pvas(read_text(o.input, in));
  const auto r = bfs_reach(p, o.max_counter, o.max_stack, o.max_configs);
  const auto values = r.counter_values();
  if (o.json_out) {
    json vals = json::array();
    for (const auto& v : values) vals.push_back(v);
    out << json{{"configs", r.configs.size()},
                {"counter_values", vals},
                {"truncated", r.truncated()},
                {"hit_max_counter", r.hit_max_counter},
                {"hit_max_stack", r.hit_max_stack},
                {"hit_max_configs", r.hit_max_configs}}
               .dump(2)
        << "\n";
  } else {
    out << "configs " << r.configs.size() << "\ncounter values";
    for (const auto& v : values) {
      out << " (";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
      out << ")";
    }
    out << "\n";
    if (r.truncated()) {
      out << "truncated:";
      if (r.hit_max_counter) out << " max-counter";
      if (r.hit_max_stack) out << " max-stack";
      if (r.hit_max_configs) out << " max-configs";
      out << "\n";
    }
  }
  return r.truncated() ? kInconclusive : kOk;
}

int cmd_oracle(const Options& o, std::istream& in, std::ostream& out) {
  const auto g = load_gvas(o.input, in);
  OracleResult res;
  if (!o.start.empty() || o.input_value >= 0) {
    const auto ng = normalize(g);
    const NtId x = o.start.empty() ? ng.start() : ng.grammar().at(o.start);
    const Counter c = o.input_value >= 0 ? o.input_value : ng.c_init();
    if (c > o.max) throw Error("--input exceeds --max");
    ReachTable table(ng, o.max, x, c);
    res.closed = !table.capped();
    res.values = table.entry(x, c);
  } else {
    res = reachability_set(g, o.max);
  }
  if (o.json_out) {
    json j{{"closed", res.closed}, {"values", res.values}};
    j["max"] = res.max() ? json(*res.max()) : json(nullptr);
    j["capped_at"] = res.closed ? json(nullptr) : json(o.max);
    out << j.dump(2) << "\n";
  } else {
    out << (res.closed ? "closed" : "capped at " + std::to_string(o.max)) << "\nvalues " << set_string(res.values)
        << "\nmax " << (res.max() ? std::to_string(*res.max()) : "none") << "\n";
  }
  return res.closed ? kOk : kInconclusive;
}

int cmd_decide(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto g = load_gvas(o.input, in);
  DecideOptions opts;
  opts.max_cap = o.cap;
  opts.oracle_max = o.oracle_max;
  opts.complete = o.complete;
  opts.pruning = !o.no_pruning;
  if (o.prefix_len > 0) opts.check_prefix_closed = o.prefix_len;
  const auto v = decide(g, opts);
  for (const auto& w : v.warnings) err << "warning: " << w << "\n";

  std::string method;
  switch (v.kind) {
    case Verdict::Kind::Unbounded: method = "certificate"; break;
    case Verdict::Kind::BoundedClosure: method = "oracle-closure"; break;
    case Verdict::Kind::BoundedCapExhausted: method = "cap-exhausted"; break;
    case Verdict::Kind::Inconclusive: break;
  }
  if (o.json_out) {
    json j{{"verdict", to_string(v.kind)},
           {"budgets", {{"caps", v.caps_tried}, {"oracle", v.budgets_tried}}},
           {"warnings", v.warnings}};
    j["method"] = method.empty() ? json(nullptr) : json(method);
    if (v.certificate) {
      j["certificate"] = certificate_document(v.normalized.gvas(), *v.certificate);
      j["certificate_cap"] = v.certificate_cap;
    }
    if (v.kind == Verdict::Kind::BoundedClosure) j["reach_set"] = v.reach_set;
    out << j.dump(2) << "\n";
  } else {
    out << to_string(v.kind);
    if (!method.empty()) out << " (" << method << ")";
    out << "\n";
    if (v.certificate) {
      out << "cap " << v.certificate_cap << "\ns " << path_to_string(v.certificate->s) << "\nt "
          << path_to_string(v.certificate->t) << "\n"
          << certificate_document(v.normalized.gvas(), *v.certificate).dump() << "\n";
    }
    if (v.kind == Verdict::Kind::BoundedClosure) out << "reach set " << set_string(v.reach_set) << "\n";
  }
  return v.kind == Verdict::Kind::Inconclusive ? kInconclusive : kOk;
}

struct LoadedTree {
  Gvas gvas;
  FlowTree tree;
  std::optional<NodePath> s;
  std::optional<NodePath> t;
};

LoadedTree load_tree(const std::string& path, const Options& o, std::istream& in) {
  auto doc = parse_tree_document(read_text(path, in));
  LoadedTree r;
  if (!o.gvas_file.empty()) r.gvas = load_gvas(o.gvas_file, in);
  else if (doc.gvas) r.gvas = parse_gvas(*doc.gvas);
  else throw Error("no grammar: embed \"gvas\" in the document or pass --gvas");
  r.tree = flow_from_json(r.gvas.grammar, doc.tree);
  r.s = o.s_path.empty() ? doc.s : std::optional<NodePath>(path_from_string(o.s_path));
  r.t = o.t_path.empty() ? doc.t : std::optional<NodePath>(path_from_string(o.t_path));
  return r;
}

int cmd_verify(const Options& o, std::istream& in, std::ostream& out) {
  if (o.flow_tree.empty() == o.certificate.empty()) throw Error("pass exactly one of --flow-tree and --certificate");
  const bool cert_mode = !o.certificate.empty();
  const auto lt = load_tree(cert_mode ? o.certificate : o.flow_tree, o, in);
  std::vector<Violation> violations;
  if (cert_mode) {
    if (!lt.s || !lt.t) throw Error("certificate needs node paths s and t (--s/--t or embedded)");
    violations = validate_certificate(lt.gvas, Certificate{lt.tree, *lt.s, *lt.t});
  } else {
    violations = validate_flow_tree(lt.gvas, lt.tree);
  }
  if (o.dot) {
    out << to_dot(lt.gvas.grammar, lt.tree, lt.s, lt.t);
  } else if (o.json_out) {
    json arr = json::array();
    for (const auto& v : violations) arr.push_back({{"path", to_json(v.path)}, {"message", v.message}});
    out << json{{"valid", violations.empty()}, {"violations", arr}}.dump(2) << "\n";
  } else if (violations.empty()) {
    out << "ok\n";
  } else {
    for (const auto& v : violations) out << describe(v) << "\n";
  }
  return violations.empty() ? kOk : kViolation;
}

int cmd_rank(const Options& o, std::istream& in, std::ostream& out) {
  const auto lt = load_tree(o.input, o, in);
  const auto r = rank_of(lt.tree);
  const auto good = is_good(lt.tree);
  if (o.json_out) {
    json j{{"rank", {r.first, r.second}}, {"good", good.has_value()}};
    if (good) j["pair"] = {{"s", to_json(good->s)}, {"t", to_json(good->t)}};
    out << j.dump(2) << "\n";
  } else {
    out << "rank (" << r.first << ", " << r.second << ")\n";
    if (good) out << "good s=" << path_to_string(good->s) << " t=" << path_to_string(good->t) << "\n";
    else out << "bad\n";
  }
  return kOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.kind == "gvas") {
    RandomGvasParams p;
    p.max_nonterminals = o.size;
    out << print_gvas(random_gvas(o.seed, p));
  } else if (o.kind == "normalized") {
    out << print_gvas(random_normalized(o.seed, o.size).gvas());
  } else if (o.kind == "pvas") {
    RandomPvasParams p;
    p.max_states = o.size;
    out << print_pvas(random_pvas(o.seed, p));
  } else {
    throw Error("unknown instance kind '" + o.kind + "' (gvas, normalized, pvas)");
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counter-boundedness of one-dimensional pushdown VAS via grammar-controlled VAS"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("file", o.input, "GVAS or PVAS text file, '-' for stdin")->capture_default_str();
  };
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", o.json_out, "Emit one JSON document"); };

  auto* normalize_cmd = app.add_subcommand("normalize", "Print the weak-CNF grammar");
  add_input(normalize_cmd);

  auto* disp_cmd = app.add_subcommand("displacement", "Print the displacement of every nonterminal");
  add_input(disp_cmd);
  add_json(disp_cmd);

  auto* pump_cmd = app.add_subcommand("pump", "Positive pump and its context (exit 1 when absent)");
  add_input(pump_cmd);
  add_json(pump_cmd);

  auto* witness_cmd = app.add_subcommand("witness", "Complete trees whose sums match the displacement signs");
  add_input(witness_cmd);
  add_json(witness_cmd);
  witness_cmd->add_option("--starts", o.starts, "Comma-separated nonterminals of the normalized grammar")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a one-dimensional PVAS to GVAS text");
  add_input(reduce_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "Breadth-first reachability of a PVAS (exit 2 when truncated)");
  add_input(sim_cmd);
  add_json(sim_cmd);
  sim_cmd->add_option("--max-counter", o.max_counter, "Discard configurations with a larger counter")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sim_cmd->add_option("--max-stack", o.max_stack, "Discard configurations with a higher stack")->capture_default_str();
  sim_cmd->add_option("--max-configs", o.max_configs, "Stop after this many configurations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact reachable counter values within [0, max] (exit 2 when capped)");
  add_input(oracle_cmd);
  add_json(oracle_cmd);
  oracle_cmd->add_option("--max", o.max, "Counter budget N")->check(CLI::NonNegativeNumber)->capture_default_str();
  oracle_cmd->add_option("--start", o.start, "Nonterminal of the normalized grammar (default: start symbol)");
  oracle_cmd->add_option("--input", o.input_value, "Input counter value (default: counter_init)")
      ->check(CLI::NonNegativeNumber);

  auto* decide_cmd = app.add_subcommand("decide", "Counter-boundedness verdict (exit 2 when inconclusive)");
  add_input(decide_cmd);
  add_json(decide_cmd);
  decide_cmd->add_option("--cap", o.cap, "Largest certificate cap of the schedule 16, 64, 256, ...")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  decide_cmd->add_option("--oracle-max", o.oracle_max, "Largest oracle budget of the schedule 32, 64, 128, ...")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  decide_cmd->add_flag("--complete", o.complete, "Finish with a search at the theoretical cap");
  decide_cmd->add_flag("--no-pruning", o.no_pruning, "Search without the small-certificate bounds");
  decide_cmd->add_option("--check-prefix-closed", o.prefix_len, "Sample words up to this length for prefix closure");

  auto* verify_cmd = app.add_subcommand("verify", "Validate a flow tree or a certificate (exit 1 on violations)");
  verify_cmd->add_option("--flow-tree", o.flow_tree, "Flow tree JSON file");
  verify_cmd->add_option("--certificate", o.certificate, "Certificate JSON file");
  verify_cmd->add_option("--gvas", o.gvas_file, "Grammar file when the document embeds none");
  verify_cmd->add_option("--s", o.s_path, "Path of s, e.g. 0.1 (overrides the document)");
  verify_cmd->add_option("--t", o.t_path, "Path of t (overrides the document)");
  verify_cmd->add_flag("--dot", o.dot, "Print a Graphviz rendering instead of the report");
  add_json(verify_cmd);

  auto* rank_cmd = app.add_subcommand("rank", "Rank of a flow tree and whether it is good");
  add_input(rank_cmd);
  add_json(rank_cmd);
  rank_cmd->add_option("--gvas", o.gvas_file, "Grammar file when the document embeds none");

  auto* gen_cmd = app.add_subcommand("gen", "Seeded random instance");
  gen_cmd->add_option("kind", o.kind, "gvas, normalized or pvas")->capture_default_str();
  gen_cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--size", o.size, "Nonterminals (gvas, normalized) or states (pvas)")
      ->check(CLI::Range(1, 6))
      ->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (normalize_cmd->parsed()) return cmd_normalize(o, in, out);
    if (disp_cmd->parsed()) return cmd_displacement(o, in, out);
    if (pump_cmd->parsed()) return cmd_pump(o, in, out);
    if (witness_cmd->parsed()) return cmd_witness(o, in, out);
    if (reduce_cmd->parsed()) return cmd_reduce(o, in, out);
    if (sim_cmd->parsed()) return cmd_simulate(o, in, out);
    if (oracle_cmd->parsed()) return cmd_oracle(o, in, out);
    if (decide_cmd->parsed()) return cmd_decide(o, in, out, err);
    if (verify_cmd->parsed()) return cmd_verify(o, in, out);
    if (rank_cmd->parsed()) return cmd_rank(o, in, out);
    if (gen_cmd->parsed()) return cmd_gen(o, out);
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace cbound::cli

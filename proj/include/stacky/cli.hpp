#ifndef STACKY_CLI_HPP
#define STACKY_CLI_HPP

/* Command-line front end.  Exit codes:
 *   0  constructed / verified / query answered
 *   1  certificate rejected
 *   2  inconclusive (global check fails or search exhausted)
 *   3  input error */

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stacky/certify.hpp"

namespace stacky {

enum ExitCode { kExitOk = 0, kExitRejected = 1, kExitInconclusive = 2, kExitInputError = 3 };

inline int exit_code_for(Errc c)
{
  switch (c) {
    case Errc::GlobalCheckInconclusive:
    case Errc::SearchExhausted:
    case Errc::InternalInconsistency: return kExitInconclusive;
    default: return kExitInputError;
  }
}

struct CliConfig {
  std::string field = "x";
  std::string p, q;
  std::string bound = "100";
  std::string profile_path, out_path, cert_path, place;
  bool verbose = false;
};

inline std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MalformedInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << bytes)) throw Error(Errc::MalformedInput, "cannot write " + path);
}

/* {"field": "x^2+1", "N": "1", "unit_generators": ["t"]}; elements use the
 * same grammar as --p and --q. */
inline FieldArithmeticProfile load_profile(const NumberField& K, const std::string& bytes)
{
  Json j = parse_json(bytes);
  try {
    detail::expect_keys(j, {"field", "N", "unit_generators"}, "profile");
    NumberField F = parse_field(detail::read_string(detail::member(j, "field"), "field"));
    if (!(F == K)) throw Error(Errc::PreconditionViolated, "profile field differs from --field");
    Integer N = detail::read_int(detail::member(j, "N"), "N");
    const Json& uj = detail::member(j, "unit_generators");
    if (!uj.is_array()) detail::bad_field("unit_generators must be an array");
    std::vector<Element> units;
    for (auto& u : uj) units.push_back(K.parse_element(detail::read_string(u, "unit generator")));
    return user_profile(K, N, units);
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw Error(Errc::MalformedInput, std::string("profile: ") + e.what());
    throw;
  }
}

/* "real" or "real:k" (k-th real place, from 0), "ell" when a single place
 * lies above ell, or "ell:g" with g the local factor written in t. */
inline Place parse_place(const NumberField& K, const std::string& text)
{
  auto colon = text.find(':');
  std::string head = text.substr(0, colon), tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "real" || head == "inf") {
    auto reals = K.real_places();
    Integer k = 0;
    if (!tail.empty() && !parse_decimal(tail, k)) throw Error(Errc::ParseError, "bad real place index " + tail);
    if (k < 0 || k >= static_cast<long>(reals.size())) throw Error(Errc::ParseError, "no real place " + text);
    return reals[k.get_ui()];
  }
  Integer ell;
  if (!parse_decimal(head, ell) || ell < 2 || !is_prime(ell) || ell > Integer(1000000000))
    throw Error(Errc::ParseError, "place must be real[:k] or a prime, got " + text);
  auto places = K.places_above(to_u64(ell));
  if (tail.empty()) {
    if (places.size() != 1) throw Error(Errc::ParseError, "several places above " + head + "; use ell:factor");
    return places[0];
  }
  QPoly g = parse_poly(tail, 't');
  FpPoly gbar;
  for (auto& c : g) {
    if (c.get_den() != 1) throw Error(Errc::ParseError, "local factor must have integer coefficients");
    gbar.push_back(reduce_mod(c, to_u64(ell)));
  }
  while (!gbar.empty() && gbar.back() == 0) gbar.pop_back();
  for (auto& P : places)
    if (P.local_factor == gbar) return P;
  throw Error(Errc::ParseError, "no place above " + head + " with local factor " + tail);
}

inline Integer parse_bound(const std::string& text)
{
  Integer b;
  if (!parse_decimal(text, b)) throw Error(Errc::ParseError, "bound must be a decimal integer");
  if (b < 2) throw Error(Errc::PreconditionViolated, "bound must be at least 2");
  if (b > Integer(100000000)) throw Error(Errc::PreconditionViolated, "bound above 10^8 is not supported");
  return b;
}

inline Element parse_required(const NumberField& K, const std::string& text, const char* flag)
{
  if (text.empty()) throw Error(Errc::PreconditionViolated, std::string(flag) + " is required");
  return K.parse_element(text);
}

namespace detail {

inline int run_construct(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
  auto t0 = std::chrono::steady_clock::now();
  NumberField K = parse_field(cfg.field);
  Integer bound = parse_bound(cfg.bound);
  if (cfg.p.empty() != cfg.q.empty()) throw Error(Errc::PreconditionViolated, "--p and --q go together");
  FieldArithmeticProfile prof = cfg.profile_path.empty() ? (require_small_degree(K, "profile"), compute_profile(K))
                                                         : load_profile(K, read_file(cfg.profile_path));
  if (cfg.verbose)
    err << "field " << K.poly_text() << "  N = " << prof.N << "  units " << prof.unit_generators.size() << " ("
        << provenance_name(prof.provenance) << ")\n";

  StackyCurveModel m = [&] {
    if (!cfg.p.empty()) return make_model(K, K.parse_element(cfg.p), K.parse_element(cfg.q));
    auto pair = find_prime_pair(prof, bound);
    return make_model(K, pair.p, pair.q);
  }();
  if (cfg.verbose) err << "pair p = " << K.format(m.p) << ", q = " << K.format(m.q) << "\n";

  CounterexampleReport report = [&] {
    try {
      return build_counterexample_report(m, prof.N, prof.unit_generators, prof.provenance);
    } catch (const Error& e) {
      if (e.code() != Errc::GlobalCheckInconclusive) throw;
      Json j = {{"status", "inconclusive"}, {"p", K.format(m.p)}, {"q", K.format(m.q)}, {"reason", e.what()}};
      out << j.dump(2) << "\n";
      throw;
    }
  }();
  std::string bytes = serialize_report(report);
  auto verdict = validate_report(bytes);
  if (!verdict.accepted) throw Error(Errc::InternalInconsistency, "fresh certificate fails validation: " + verdict.reason);
  if (cfg.out_path.empty()) {
    out << bytes;
  } else {
    write_file(cfg.out_path, bytes);
    Json j = {{"status", "constructed"},
              {"p", K.format(m.p)},
              {"q", K.format(m.q)},
              {"place_of_p", place_name(*m.place_of_p)},
              {"certificate", cfg.out_path}};
    out << j.dump(2) << "\n";
  }
  if (cfg.verbose) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    err << "done in " << ms << " ms\n";
  }
  return kExitOk;
}

inline int run_verify(const CliConfig& cfg, std::ostream& out)
{
  if (cfg.cert_path.empty()) throw Error(Errc::PreconditionViolated, "--cert is required");
  auto verdict = validate_report(read_file(cfg.cert_path));
  Json j = {{"verdict", verdict.accepted ? "accepted" : "rejected"}};
  if (!verdict.accepted) j["reason"] = verdict.reason;
  out << j.dump(2) << "\n";
  return verdict.accepted ? kExitOk : kExitRejected;
}

inline int run_genus(const CliConfig& cfg, std::ostream& out)
{
  NumberField K = parse_field(cfg.field);
  auto m = make_model(K, parse_required(K, cfg.p, "--p"), parse_required(K, cfg.q, "--q"));
  Json j = {{"p", K.format(m.p)}, {"q", K.format(m.q)}, {"genus", rational_json(model_genus(m))}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

inline int run_hilbert(const CliConfig& cfg, std::ostream& out)
{
  NumberField K = parse_field(cfg.field);
  Element a = parse_required(K, cfg.p, "--p"), b = parse_required(K, cfg.q, "--q");
  std::vector<Place> places =
      cfg.place.empty() ? symbol_support(K, a, b) : std::vector<Place>{parse_place(K, cfg.place)};
  Json symbols = Json::array();
  int product = 1;
  for (auto& v : places) {
    int s = to_int(hilbert_symbol(K, a, b, v));
    product *= s;
    symbols.push_back({{"place", place_json(v)}, {"name", place_name(v)}, {"value", std::to_string(s)}});
  }
  Json j = {{"a", K.format(a)}, {"b", K.format(b)}, {"symbols", symbols}};
  if (cfg.place.empty()) j["product"] = std::to_string(product);
  out << j.dump(2) << "\n";
  return kExitOk;
}

inline int run_local_points(const CliConfig& cfg, std::ostream& out)
{
  NumberField K = parse_field(cfg.field);
  auto m = make_relaxed_model(K, parse_required(K, cfg.p, "--p"), parse_required(K, cfg.q, "--q"));
  std::vector<Place> extra;
  if (!cfg.place.empty()) extra.push_back(parse_place(K, cfg.place));
  LocalTable table = verify_local_everywhere(m, extra);
  Json entries = Json::array();
  for (auto& e : table.entries) {
    Json je = local_json(e);
    je["name"] = place_name(e.place);
    entries.push_back(je);
  }
  Json j = {{"p", K.format(m.p)}, {"q", K.format(m.q)}, {"entries", entries}, {"generic_rule", table.generic_rule}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  CLI::App app{"stacky: stacky curves without integral points despite local points everywhere"};
  app.require_subcommand(1);
  CliConfig cfg;
  auto field = [&](CLI::App* s) { s->add_option("--field", cfg.field, "monic irreducible polynomial in x")->capture_default_str(); };
  auto pq = [&](CLI::App* s, bool required) {
    auto* p = s->add_option("--p", cfg.p, "element in t");
    auto* q = s->add_option("--q", cfg.q, "element in t");
    if (required) {
      p->required();
      q->required();
    }
  };
  auto verbose = [&](CLI::App* s) { s->add_flag("--verbose,-v", cfg.verbose, "diagnostics on stderr"); };

  auto* construct = app.add_subcommand("construct", "search a pair and write a certificate");
  field(construct);
  pq(construct, false);
  construct->add_option("--bound", cfg.bound, "largest rational prime searched")->capture_default_str();
  construct->add_option("--profile", cfg.profile_path, "JSON file with field, N, unit_generators");
  construct->add_option("--out", cfg.out_path, "certificate path (stdout if omitted)");
  verbose(construct);

  auto* verify = app.add_subcommand("verify", "validate a certificate");
  verify->add_option("--cert", cfg.cert_path, "certificate path")->required();
  verbose(verify);

  auto* genus = app.add_subcommand("genus", "genus of the model for (p, q)");
  field(genus);
  pq(genus, true);
  verbose(genus);

  auto* hilbert = app.add_subcommand("hilbert", "Hilbert symbols (p, q)_v");
  field(hilbert);
  pq(hilbert, true);
  hilbert->add_option("--place", cfg.place, "real[:k], ell, or ell:factor; all relevant places if omitted");
  verbose(hilbert);

  auto* local = app.add_subcommand("local-points", "local point table of the model");
  field(local);
  pq(local, true);
  local->add_option("--place", cfg.place, "additional place to certify");
  verbose(local);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (construct->parsed()) return detail::run_construct(cfg, out, err);
    if (verify->parsed()) return detail::run_verify(cfg, out);
    if (genus->parsed()) return detail::run_genus(cfg, out);
    if (hilbert->parsed()) return detail::run_hilbert(cfg, out);
    return detail::run_local_points(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace stacky

#endif

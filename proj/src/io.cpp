#include "bmolab/io.hpp"

#include <fstream>
#include <sstream>

namespace bmolab {

namespace {

std::string rstr(const Rational& r) { return r.to_decimal_string(); }

Rational rparse(const ojson& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    return parse_rational(j.get<std::string>());
}

}  // namespace

ojson to_json(const GridSpec& spec) {
    return ojson{{"dim", spec.dim}, {"level", spec.level}};
}

GridSpec gridspec_from_json(const ojson& j) {
    return GridSpec(j.at("dim").get<int>(), j.at("level").get<int>());
}

ojson to_json(const GridFunction& f) {
    ojson j = to_json(f.spec());
    ojson vals = ojson::array();
    for (const auto& v : f.values()) vals.push_back(rstr(v));
    j["values"] = std::move(vals);
    if (f.integer_valued()) j["integer_valued"] = true;
    return j;
}

GridFunction gridfunction_from_json(const ojson& j) {
    GridSpec spec = gridspec_from_json(j);
    std::vector<Rational> vals;
    for (const auto& v : j.at("values")) vals.push_back(rparse(v));
    return GridFunction(spec, std::move(vals), j.value("integer_valued", false));
}

ojson to_json(const CellSet& s) {
    ojson j = to_json(s.spec());
    j["bitmap"] = s.to_hex();
    return j;
}

CellSet cellset_from_json(const ojson& j) {
    return CellSet::from_hex(gridspec_from_json(j), j.at("bitmap").get<std::string>());
}

ojson to_json(const StepFunction& f) {
    ojson pieces = ojson::array();
    for (const auto& [len, val] : f.pieces()) pieces.push_back(ojson::array({rstr(len), rstr(val)}));
    return ojson{{"pieces", pieces}};
}

StepFunction stepfunction_from_json(const ojson& j) {
    std::vector<std::pair<Rational, Rational>> pieces;
    for (const auto& p : j.at("pieces")) pieces.emplace_back(rparse(p.at(0)), rparse(p.at(1)));
    return StepFunction::from_pieces(std::move(pieces));
}

ojson to_json(const Region& r) {
    ojson j;
    j["level"] = r.level;
    j["corner"] = r.corner;
    j["sides"] = r.sides;
    j["measure"] = rstr(r.measure());
    return j;
}

ojson to_json(const OscillationReport& rep) {
    return ojson{{"O", rstr(rep.o)},
                 {"A", rstr(rep.a)},
                 {"D", rstr(rep.d)},
                 {"median", rstr(rep.median)},
                 {"mean", rstr(rep.mean)}};
}

ojson to_json(const MarginReport& rep) {
    ojson rows = ojson::array();
    for (const auto& row : rep.rows) {
        ojson r{{"alpha", rstr(row.alpha)},
                {"lhs", rstr(row.lhs)},
                {"rhs", row.rhs},
                {"slack", row.slack},
                {"pass", row.pass}};
        if (!row.note.empty()) r["note"] = row.note;
        rows.push_back(std::move(r));
    }
    return ojson{{"name", rep.name}, {"pass", rep.pass}, {"rows", rows}};
}

ojson to_json(const BalanceCertificate& cert) {
    return ojson{{"region", to_json(cert.region)},
                 {"frac_plus", cert.frac_plus.to_fraction_string()},
                 {"frac_minus", cert.frac_minus.to_fraction_string()},
                 {"certified_s", cert.certified_s.to_string()},
                 {"certified_s_value", cert.certified_s.to_double()},
                 {"case", cert.case_tag},
                 {"tau", cert.tau_used.to_string()},
                 {"delta", cert.delta.to_fraction_string()},
                 {"multiplicity", cert.multiplicity}};
}

ojson to_json(const SearchConfig& cfg) {
    return ojson{{"tau", cfg.tau.to_string()},
                 {"dim", cfg.dim},
                 {"level", cfg.level},
                 {"refine", cfg.refine},
                 {"kind", to_string(cfg.kind)},
                 {"strategy", cfg.strategy == SearchStrategy::Exhaustive ? "exhaustive" : "anneal"},
                 {"budget", cfg.budget},
                 {"seed", cfg.seed},
                 {"strict", cfg.strict_feasibility},
                 {"anneal_chains", cfg.anneal_chains}};
}

SearchConfig search_config_from_json(const ojson& j) {
    SearchConfig cfg;
    cfg.tau = parse_quadreal(j.at("tau").is_string() ? j.at("tau").get<std::string>()
                                                     : j.at("tau").dump());
    cfg.dim = j.at("dim").get<int>();
    cfg.level = j.at("level").get<int>();
    cfg.refine = j.value("refine", 0);
    cfg.kind = parse_collection_kind(j.value("kind", std::string("dyadic")));
    std::string strat = j.value("strategy", std::string("exhaustive"));
    if (strat == "exhaustive") cfg.strategy = SearchStrategy::Exhaustive;
    else if (strat == "anneal") cfg.strategy = SearchStrategy::Anneal;
    else throw ParseError("unknown strategy '" + strat + "'");
    cfg.budget = j.value("budget", 1'000'000ULL);
    cfg.seed = j.value("seed", 0ULL);
    cfg.workers = j.value("workers", 1);
    cfg.strict_feasibility = j.value("strict", true);
    cfg.anneal_chains = j.value("anneal_chains", 8);
    cfg.checkpoint_path = j.value("checkpoint", std::string());
    cfg.checkpoint_every = j.value("checkpoint_every", 1ULL << 16);
    return cfg;
}

ojson to_json(const SearchReport& rep, bool include_timing) {
    ojson j;
    j["config"] = to_json(rep.config);
    ojson result{{"configurations_examined", rep.configurations_examined},
                 {"feasible_count", rep.feasible_count},
                 {"s_hat", rep.s_hat.to_fraction_string()},
                 {"s_hat_value", rep.s_hat.to_double()},
                 {"vacuous", rep.vacuous}};
    if (!rep.vacuous) {
        result["worst_config_index"] = rep.worst_config_index;
        result["worst_eplus"] = rep.worst_eplus_hex;
        result["worst_eminus"] = rep.worst_eminus_hex;
    }
    j["result"] = std::move(result);
    if (include_timing) j["timing"] = ojson{{"wall_seconds", rep.wall_seconds}};
    return j;
}

ojson to_json(const MinimalityReport& rep) {
    ojson j;
    j["cube"] = to_json(rep.cube);
    j["good"] = rep.good;
    j["exceptional"] = rep.exceptional;
    j["minimal"] = rep.minimal;
    j["meas_plus"] = rstr(rep.meas_plus);
    j["meas_minus"] = rstr(rep.meas_minus);
    j["tau_gap"] = rstr(rep.tau_gap);
    j["equality_defect"] = rstr(rep.equality_defect);
    if (rep.witness) j["witness"] = to_json(*rep.witness);
    if (rep.balancing_cube) {
        j["balancing_cube"] = to_json(*rep.balancing_cube);
        j["balancing_fraction"] = rep.balancing_fraction->to_fraction_string();
    }
    if (rep.minimal) j["fap_within_tolerance"] = rep.fap_within_tolerance;
    return j;
}

ojson to_json(const QuestionBReport& rep) {
    ojson rows = ojson::array();
    for (const auto& r : rep.rows) {
        rows.push_back(ojson{{"trial", r.trial},
                             {"cube", to_json(r.minimal_cube)},
                             {"defect", rstr(r.defect)},
                             {"exceptional", r.ended_exceptional}});
    }
    return ojson{{"dim", rep.dim},
                 {"level", rep.level},
                 {"tau_prime", rep.tau_prime.to_fraction_string()},
                 {"seed", rep.seed},
                 {"implied_s", rep.implied_s.to_fraction_string()},
                 {"implied_s_value", rep.implied_s.to_double()},
                 {"max_defect", rstr(rep.max_defect)},
                 {"rows", rows}};
}

ojson to_json(const JnConstants& c) {
    ojson j{{"b", c.b},
            {"B", c.big_b},
            {"center", to_string(c.center)},
            {"comparison", to_string(c.comparison)},
            {"flavor", to_string(c.flavor)}};
    if (c.flavor == JnConstants::Flavor::J) j["s"] = c.j_s;
    return j;
}

std::string gridfunction_to_csv(const GridFunction& f) {
    std::ostringstream out;
    out << "cell,value\n";
    for (long long i = 0; i < f.spec().cell_count(); ++i)
        out << i << "," << rstr(f.value(i)) << "\n";
    return out.str();
}

GridFunction gridfunction_from_csv(const std::string& text, int dim, int level) {
    GridSpec spec(dim, level);
    std::vector<Rational> vals(spec.cell_count(), Rational(0));
    std::vector<bool> seen(spec.cell_count(), false);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "cell,value") continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("bad csv row '" + line + "'");
        long long idx = std::stoll(line.substr(0, comma));
        if (idx < 0 || idx >= spec.cell_count()) throw ParseError("cell index out of range");
        vals[idx] = parse_rational(line.substr(comma + 1));
        seen[idx] = true;
    }
    for (long long i = 0; i < spec.cell_count(); ++i)
        if (!seen[i]) throw ParseError("csv missing cell " + std::to_string(i));
    return GridFunction(spec, std::move(vals));
}

std::string search_report_to_csv(const SearchReport& rep) {
    std::ostringstream out;
    out << "batch_begin,batch_end,examined,feasible,partial_min\n";
    for (const auto& b : rep.batches)
        out << b.begin << "," << b.end << "," << b.examined << "," << b.feasible << ","
            << (b.has_min ? b.min_score.to_fraction_string() : "") << "\n";
    out << "# s_hat," << rep.s_hat.to_fraction_string() << ",vacuous," << (rep.vacuous ? 1 : 0)
        << ",worst_index," << rep.worst_config_index << "\n";
    return out.str();
}

ojson load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("json parse failure: ") + e.what());
    }
}

void save_json(const std::string& path, const ojson& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

GridFunction load_gridfunction(const std::string& path, int csv_dim, int csv_level) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        if (csv_dim < 1 || csv_level < 0)
            throw ParseError("csv input needs --dim and --level");
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return gridfunction_from_csv(buf.str(), csv_dim, csv_level);
    }
    return gridfunction_from_json(load_json(path));
}

}  // namespace bmolab

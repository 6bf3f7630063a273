// Command-line surface: measure queries on truth tables and matrices,
// verification suites over the fixed corpus, and witness export. One JSON
// document per run, optional CSV summary, deterministic for a given
// (seed, budgets) triple. Exit codes: 0 all assertions pass, 1 at least one
// failure, 2 usage or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <liftlab/suites.hpp>

using nlohmann::ordered_json;
using namespace liftlab;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        out += ch;
        if (ch == '"') out += '"';
    }
    return out + "\"";
}

// --- measures ---

int run_measures(const std::string& input, const std::string& out_path, const std::string& format,
                 std::uint64_t node_budget) {
    std::string text = read_file(input);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError(input + " is empty");

    ordered_json doc;
    doc["tool"] = "liftlab";
    doc["input"] = input;
    if (text.compare(first, 2, "n=") == 0) {
        std::string line = text.substr(first);
        if (std::size_t nl = line.find('\n'); nl != std::string::npos) line.resize(nl);
        TruthTable f = TruthTable::parse(line);
        doc["kind"] = "function";
        doc["n"] = f.arity();
        doc["s"] = sensitivity(f);
        doc["bs"] = block_sensitivity(f).value;
        doc["deg"] = degree(f);
        doc["dt"] = decision_tree_depth(f);
    } else {
        GadgetMatrix m = GadgetMatrix::parse(text.substr(first));
        doc["kind"] = "matrix";
        doc["rows"] = m.rows;
        doc["cols"] = m.cols;
        doc["rank_q"] = rank_q(m);
        if (m.is_boolean()) doc["rank_f2"] = rank_f2(m);
        CoverResult cov;
        try {
            cov = cover_number(m, CoverMode::Exact, node_budget);
        } catch (const BudgetError&) {
            cov = cover_number(m, CoverMode::GreedyUpper, node_budget);
        }
        doc["C"] = cov.size;
        doc["C_mode"] = cov.exact ? "exact" : "greedy";
        CCOptions opt;
        opt.node_budget = node_budget;
        CCResult cc = exact_cc(m, opt);
        doc["D"] = cc.value;
        doc["D_exact"] = cc.exact;
        if (!cc.exact) {
            doc["D_lower"] = cc.lower;
            doc["D_upper"] = cc.upper;
        }
    }

    std::string rendered;
    if (format == "csv") {
        std::ostringstream csv;
        csv << "field,value\n";
        for (auto& [k, v] : doc.items())
            csv << csv_escape(k) << "," << csv_escape(v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        rendered = csv.str();
    } else {
        rendered = doc.dump(2) + "\n";
    }
    if (out_path.empty()) std::cout << rendered;
    else write_file(out_path, rendered);
    return 0;
}

// --- suite ---

ordered_json suite_to_json(const SuiteReport& rep, ordered_json& witnesses) {
    ordered_json js;
    js["suite"] = rep.suite;
    js["wall_ms"] = rep.wall_ms;
    auto t = rep.tally();
    js["totals"] = {{"pass", t[0]}, {"fail", t[1]}, {"vacuous", t[2]}, {"degenerate", t[3]}, {"skipped", t[4]}};
    ordered_json checks = ordered_json::array();
    for (const SuiteCheck& c : rep.checks) {
        ordered_json jc;
        jc["name"] = c.name;
        jc["status"] = check_status_name(c.status);
        jc["detail"] = c.detail;
        if (!c.witnesses.empty()) {
            ordered_json refs = ordered_json::array();
            for (const CheckWitness& w : c.witnesses) {
                refs.push_back(w.id);
                ordered_json jw;
                jw["kind"] = w.kind;
                if (w.kind == "cover") {
                    jw["rows"] = w.rows;
                    jw["cols"] = w.cols;
                }
                jw["payload"] = w.payload;
                witnesses[w.id] = std::move(jw);
            }
            jc["witnesses"] = std::move(refs);
        }
        checks.push_back(std::move(jc));
    }
    js["checks"] = std::move(checks);
    return js;
}

int run_suite(const std::string& name, const SuiteBudgets& budgets, const std::string& out_path,
              const std::string& format) {
    std::vector<SuiteReport> reports;
    if (name == "relations") reports.push_back(run_relations(budgets));
    else if (name == "rank-lemma") reports.push_back(run_rank_lemma(budgets));
    else if (name == "lemma3") reports.push_back(run_lemma3(budgets));
    else if (name == "synthesis") reports.push_back(run_synthesis(budgets));
    else if (name == "fknn") reports.push_back(run_fknn(budgets));
    else if (name == "bs-reduction") reports.push_back(run_bs_reduction(budgets));
    else reports = run_all(budgets);

    bool all_pass = true;
    ordered_json doc;
    doc["tool"] = "liftlab";
    doc["suite"] = name;
    doc["seed"] = budgets.seed;
    doc["budget_cells"] = budgets.cells;
    doc["budget_nodes"] = budgets.cover_nodes;
    doc["workers"] = budgets.workers;
    ordered_json witnesses = ordered_json::object();
    ordered_json suites = ordered_json::array();
    for (const SuiteReport& rep : reports) {
        suites.push_back(suite_to_json(rep, witnesses));
        all_pass = all_pass && rep.all_pass();
    }
    doc["suites"] = std::move(suites);
    doc["witnesses"] = std::move(witnesses);
    doc["all_pass"] = all_pass;

    write_file(out_path, doc.dump(2) + "\n");
    if (format == "csv") {
        std::ostringstream csv;
        csv << "suite,check,status,detail\n";
        for (const SuiteReport& rep : reports)
            for (const SuiteCheck& c : rep.checks)
                csv << csv_escape(rep.suite) << "," << csv_escape(c.name) << "," << check_status_name(c.status)
                    << "," << csv_escape(c.detail) << "\n";
        std::string csv_path = out_path;
        if (std::size_t dot = csv_path.rfind('.'); dot != std::string::npos) csv_path.resize(dot);
        write_file(csv_path + ".csv", csv.str());
    }

    for (const SuiteReport& rep : reports) {
        auto t = rep.tally();
        std::cout << rep.suite << ": pass=" << t[0] << " fail=" << t[1] << " vacuous=" << t[2]
                  << " degenerate=" << t[3] << " skipped=" << t[4] << " wall_ms=" << rep.wall_ms << "\n";
    }
    std::cout << (all_pass ? "all assertable checks pass" : "FAILURES PRESENT") << " (report: " << out_path << ")\n";
    return all_pass ? 0 : 1;
}

// --- export ---

int run_export(const std::string& id, const std::string& report_path, std::string out_path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(report_path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(report_path + ": " + e.what());
    }
    if (!doc.contains("witnesses") || !doc["witnesses"].contains(id))
        throw ParseError("unknown witness id `" + id + "` in " + report_path);
    const ordered_json& w = doc["witnesses"][id];
    std::string kind = w.at("kind"), payload = w.at("payload");

    if (out_path.empty()) {
        out_path = id + "." + kind;
        for (char& ch : out_path)
            if (ch == '/' || ch == '*') ch = '_';
    }
    write_file(out_path, payload);

    // reload through the owning module's parser: the export must round-trip
    std::string reloaded = read_file(out_path);
    bool ok = false;
    if (kind == "cover")
        ok = RectCover::parse(reloaded, w.at("rows").get<int>(), w.at("cols").get<int>()).to_string() == payload;
    else if (kind == "tree") ok = ProtocolTree::parse(reloaded).to_string() == payload;
    else if (kind == "trace") ok = ExtractionTrace::parse(reloaded).to_string() == payload;
    else if (kind == "table") ok = TruthTable::parse(reloaded).to_string() == payload;
    else if (kind == "matrix") ok = GadgetMatrix::parse(reloaded).to_string() == payload;
    else throw ParseError("witness `" + id + "` has unknown kind `" + kind + "`");
    if (!ok) {
        std::cerr << "round-trip mismatch for " << id << "\n";
        return 1;
    }
    std::cout << "wrote " << out_path << " (" << kind << ", round-trip verified)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liftlab: boolean-function measures, rectangle covers, and protocol synthesis workbench"};
    app.require_subcommand(1);

    std::string out_path, format = "json";
    SuiteBudgets budgets;

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output path (default: stdout for measures, liftlab-report.json for suites)");
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* measures = app.add_subcommand("measures", "print measures of a truth table or matrix file");
    std::string input;
    measures->add_option("input", input, "file holding `n=.. table=..` or `rows=.. cols=.. alphabet=..` text")
        ->required();
    add_io(measures);
    measures->add_option("--budget-cells", budgets.cells, "composed-matrix cell budget")
        ->envname("LIFTLAB_BUDGET_CELLS");
    measures->add_option("--budget-nodes", budgets.cover_nodes, "search work budget for covers and protocols");

    CLI::App* suite = app.add_subcommand("suite", "run a verification suite over the fixed corpus");
    std::string suite_name;
    suite->add_option("--suite", suite_name, "suite name")
        ->required()
        ->check(CLI::IsMember({"relations", "rank-lemma", "lemma3", "synthesis", "fknn", "bs-reduction", "all"}));
    suite->add_option("--seed", budgets.seed, "seed offset for the seeded sub-corpora");
    suite->add_option("--budget-cells", budgets.cells, "composed-matrix cell budget")
        ->envname("LIFTLAB_BUDGET_CELLS");
    suite->add_option("--budget-nodes", budgets.cover_nodes, "exact-cover search work-unit budget");
    suite->add_option("--workers", budgets.workers, "instance-level parallelism")->check(CLI::PositiveNumber);
    add_io(suite);

    CLI::App* exp = app.add_subcommand("export", "write a witness from a report in its module format");
    std::string witness_id, report_path = "liftlab-report.json";
    exp->add_option("id", witness_id, "witness id from the report's witness map")->required();
    exp->add_option("--report", report_path, "report to read (default liftlab-report.json)");
    exp->add_option("--out", out_path, "output file (default: derived from the id)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (measures->parsed()) return run_measures(input, out_path, format, budgets.cover_nodes);
        if (suite->parsed()) {
            if (out_path.empty()) out_path = "liftlab-report.json";
            return run_suite(suite_name, budgets, out_path, format);
        }
        return run_export(witness_id, report_path, out_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

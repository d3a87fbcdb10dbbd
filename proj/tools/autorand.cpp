#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "autorand/experiment.hpp"

namespace fs = std::filesystem;
using namespace autorand;

namespace {

struct Flags {
    std::optional<std::size_t> steps, horizon, search_bound;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> threshold;
    std::string out_dir = "autorand-out";
    bool replay = false;
};

void apply(const Flags& f, ExperimentConfig& cfg) {
    auto pos = [](const char* name, std::size_t v) {
        if (v == 0) throw ParseError(std::string("--") + name + " must be positive");
        return v;
    };
    if (f.steps) cfg.steps = pos("steps", *f.steps);
    if (f.horizon) cfg.horizon = pos("horizon", *f.horizon);
    if (f.search_bound) cfg.search_bound = pos("search-bound", *f.search_bound);
    if (f.seed) cfg.seed = pos("seed", *f.seed);
    if (f.threshold) {
        cfg.threshold = Dyadic::parse(*f.threshold);
        if (cfg.threshold.sign() <= 0) throw ParseError("--threshold must be positive");
    }
}

int cmd_run(const std::string& path, const Flags& f) {
    ExperimentConfig cfg = load_config(path);
    apply(f, cfg);
    auto outcome = run_experiment(cfg, f.out_dir, f.replay);
    std::cout << cfg.kind << ": " << (outcome.status() ? "FAILED" : "ok");
    if (outcome.summary.contains("final_capital")) {
        std::string c = outcome.summary["final_capital"].get<std::string>();
        const auto slash = c.find('/');
        if (slash > 40) c = c.substr(0, 12) + "...(" + std::to_string(slash) + " digits)" + c.substr(slash);
        std::cout << ", final capital " << c;
    }
    std::cout << ", artifacts in " << f.out_dir << "\n";
    for (const auto& e : outcome.failures) std::cerr << "invariant violated: " << e << "\n";
    return outcome.status();
}

int cmd_verify(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open certificate " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    auto cert = DiagonalCertificate::from_json(j);
    if (auto problem = replay_certificate(cert)) {
        std::cerr << "certificate rejected: " << *problem << "\n";
        return 1;
    }
    Dyadic top;
    for (const auto& e : cert.entries) top = std::max(top, e.capital);
    std::cout << "certificate ok: " << cert.entries.size() << " words, " << cert.enumeration.size()
              << " setups, max capital " << top.to_string() << "\n";
    return 0;
}

int cmd_growth(const std::string& path) {
    Dfa d = load_dfa(path);
    auto report = growth_report(d);
    std::cout << report.dump(2) << "\n";
    return report["brute_force_agrees"].get<bool>() ? 0 : 1;
}

int cmd_audit(const std::string& kind, const std::vector<std::string>& args, const Flags& f) {
    Setup s;
    auto arg = [&](std::size_t i) -> const std::string& {
        if (i >= args.size()) throw ParseError("audit " + kind + ": missing argument " + std::to_string(i + 1));
        return args[i];
    };
    if (kind == "tm-dynamic") {
        TmProgram p = load_tm(arg(0));
        s = tm_dynamic_bettor(p, args.size() > 1 ? load_dfa(args[1]) : Dfa::universal()).setup;
    } else if (kind == "pclass") {
        s = pclass_bettor(default_hypotheses(), args.empty() ? Dfa::universal() : load_dfa(args[0]));
    } else {
        std::string line = kind;
        for (const auto& a : args) line += " " + a;
        s = setup_from_spec(setup_spec_from_line(line, fs::current_path()));
    }
    Lcg rng(f.seed.value_or(1));
    std::set<Word> words;
    for (std::size_t n = 0; n <= 4; ++n) {
        for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
            Word w;
            for (std::size_t b = 0; b < n; ++b) w.push_back((i >> (n - 1 - b)) & 1 ? '1' : '0');
            words.insert(w);
        }
    }
    for (int i = 0; i < 32; ++i) words.insert(rng.word(10));
    std::vector<Word> probes(words.begin(), words.end());
    auto states = explore_states(s, probes, 3, 256);
    auto report = audit_fairness(s, states, probes);
    fs::create_directories(f.out_dir);
    std::ofstream(fs::path(f.out_dir) / "audit.json") << report.to_json().dump(2) << "\n";
    std::cout << s.name << ": " << report.transitions << " transitions audited at " << states.size() << " states, "
              << report.violations.size() << " violations\n";
    for (const auto& v : report.violations) {
        std::cerr << v.kind << " violation on '" << v.word << "' at " << v.state << ": " << v.detail << "\n";
    }
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automatic martingales over regular domains: experiments, certificates and audits"};
    app.require_subcommand(1);
    Flags f;
    auto add_flags = [&](CLI::App* sub) {
        sub->add_option("--steps", f.steps, "number of stages");
        sub->add_option("--threshold", f.threshold, "success threshold, \"num/2^exp\"");
        sub->add_option("--horizon", f.horizon, "adversarial text length");
        sub->add_option("--search-bound", f.search_bound, "words examined per adversarial stage");
        sub->add_option("--seed", f.seed, "seed for audit probes and random inputs");
        sub->add_option("--out-dir", f.out_dir, "directory for artifacts")->capture_default_str();
        sub->add_flag("--replay", f.replay, "require an existing certificate to be reproduced exactly");
    };

    std::string config, certificate, dfa_file, kind;
    std::vector<std::string> args;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config, "experiment config file")->required();
    add_flags(run);
    auto* verify = app.add_subcommand("verify", "replay a diagonalization certificate");
    verify->add_option("certificate", certificate)->required();
    auto* growth = app.add_subcommand("growth", "classify the slice growth of a DFA");
    growth->add_option("dfa-file", dfa_file)->required();
    auto* audit = app.add_subcommand("audit", "fairness audit of one setup");
    audit->add_option("setup-kind", kind)->required();
    audit->add_option("args", args);
    add_flags(audit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) return cmd_run(config, f);
        if (*verify) return cmd_verify(certificate);
        if (*growth) return cmd_growth(dfa_file);
        return cmd_audit(kind, args, f);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "fairsplit/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fairsplit/report.hpp"

namespace fairsplit {

namespace {

struct CliConfig {
    std::string model_path;
    std::string spec_path;
    std::string query_path;
    std::string resume_path;
    std::string domain = "symbolic";
    std::string lower = "0";
    std::optional<std::size_t> upper;
    unsigned workers = 1;
    std::string out_path;
    std::optional<double> timeout;
    unsigned max_depth = 12;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"Fairness certification of ReLU classifiers by input partitioning"};
    app.add_option("--model", cfg.model_path, "network model file")->required();
    app.add_option("--spec", cfg.spec_path, "input specification file")->required();
    auto* query = app.add_option("--query", cfg.query_path, "query restricting the analyzed space");
    auto* resume = app.add_option("--resume", cfg.resume_path, "earlier report whose excluded partitions are re-analyzed");
    query->excludes(resume);
    app.add_option("--domain", cfg.domain, "forward domain")
        ->check(CLI::IsMember({"boxes", "symbolic", "deeppoly"}));
    app.add_option("--lower", cfg.lower, "minimum partition width L");
    app.add_option("--upper", cfg.upper, "tolerated unknown ReLUs U");
    app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out_path, "report path (stdout when omitted)");
    app.add_option("--timeout", cfg.timeout, "seconds before the partition queue is abandoned")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--max-depth", cfg.max_depth, "maximum number of halvings along one lineage");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::string text;
    bool biased = false;
    try {
        NetworkModel model = load_model(cfg.model_path);
        InputSpec spec = parse_spec(read_file(cfg.spec_path));
        spec.check_against(model);

        AnalysisConfig ac = default_config(model);
        ac.domain = parse_domain(cfg.domain);
        ac.budget.lower = parse_rational(cfg.lower);
        if (ac.budget.lower < 0) throw std::invalid_argument("--lower must be non-negative");
        if (cfg.upper) ac.budget.upper = *cfg.upper;
        ac.budget.max_depth = cfg.max_depth;
        ac.workers = cfg.workers;
        ac.timeout_seconds = cfg.timeout;

        std::vector<Partition> roots;
        if (!cfg.resume_path.empty()) {
            roots = parse_resume(read_file(cfg.resume_path), spec);
        } else if (!cfg.query_path.empty()) {
            roots.push_back(root_partition(spec, parse_query(read_file(cfg.query_path), spec)));
        } else {
            roots.push_back(full_partition(spec));
        }

        AnalysisResult result = analyze(model, spec, std::move(roots), ac);
        ReportConfig rc{ac.domain, ac.budget.lower, ac.budget.upper, ac.budget.max_depth};
        text = emit_report(build_report(result, spec, rc), spec);
        biased = result.biased();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (cfg.out_path.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        f << text;
        if (!f) {
            err << "error: cannot write " << cfg.out_path << "\n";
            return 2;
        }
    }
    return biased ? 1 : 0;
}

}  // namespace fairsplit

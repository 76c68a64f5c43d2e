// Command line front end for the verification suites.  Exit code 0 when every
// check passes, 1 when any check fails, 2 on usage or argument errors.

#include <freedist/report.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace {

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
    auto num = [](const std::string& t) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(t, &pos);
        } catch (const std::exception&) {
            pos = t.size() + 1;
        }
        if (pos != t.size()) throw std::invalid_argument("bad rank '" + t + "'");
        return static_cast<std::size_t>(v);
    };
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const std::size_t v = num(s);
        return {v, v};
    }
    return {num(s.substr(0, dots)), num(s.substr(dots + 2))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification suites for the free-distribution geometry library"};
    std::string suite = "all", range = "2..4", format = "text", out_path;
    unsigned seed = 1729;
    bool deep = false, no_timestamp = false;
    app.add_option("--suite", suite,
                   "suite: algebra, kostant, models, tractor, octonion, inclusions or all");
    app.add_option("--n", range, "rank range MIN..MAX, or a single rank");
    app.add_option("--seed", seed, "seed for the randomized checks");
    app.add_option("--format", format, "output format: text or json");
    app.add_option("--out", out_path, "write the report to this path instead of stdout");
    app.add_flag("--deep", deep, "unlock the n=5 homology computation");
    app.add_flag("--no-timestamp", no_timestamp,
                 "suppress timings and the timestamp so the output is byte-stable");
    CLI11_PARSE(app, argc, argv);

    try {
        freedist::SuiteParams params;
        std::tie(params.n_min, params.n_max) = parse_range(range);
        params.seed = seed;
        params.deep = deep;
        if (format != "text" && format != "json")
            throw std::invalid_argument("unknown format '" + format + "'");

        const freedist::SuiteReport rep = freedist::run_suite(suite, params);
        const std::string body = format == "json" ? freedist::emit_json(rep, !no_timestamp)
                                                  : freedist::emit_text(rep, !no_timestamp);
        if (out_path.empty()) {
            std::cout << body;
        } else {
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
            f << body;
        }
        return rep.all_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "freedist-report: " << e.what() << "\n";
        return 2;
    }
}

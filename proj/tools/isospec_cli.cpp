#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "isospec/cli.hpp"

namespace {

isospec::Interval parse_domain(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--domain", "expected a:b");
    try {
        std::size_t used = 0;
        const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
        isospec::Interval d{std::stod(a, &used), 0.0};
        if (used != a.size()) throw std::invalid_argument(a);
        d.upper = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        return d;
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--domain", "bounds must be numbers, got '" + s + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    isospec::cli::RunConfig cfg;
    CLI::App app{"Isospectral deformations of factorized second-order operators"};
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "Read options from a key=value file");

    std::string domain, sweep_text;
    double sweep_start = 0.0, sweep_stop = 0.0;
    int sweep_count = 0, l = -1, n = -1;
    bool show_schema = false;

    app.add_option("--model", cfg.model, "oscillator1d | free1d | free3d | isotropic-l | isotropic-n")
        ->capture_default_str();
    app.add_option("--case", cfg.case_tag, "I | II | unique");
    app.add_option("--lambda", cfg.lambda, "Deformation parameter")->capture_default_str();
    app.add_option("--lambda-start", sweep_start, "First lambda of a sweep");
    app.add_option("--lambda-stop", sweep_stop, "Last lambda of a sweep");
    app.add_option("--lambda-count", sweep_count, "Number of lambdas in a sweep");
    app.add_option("--domain", domain, "Interval as a:b");
    app.add_option("--points", cfg.points, "Grid points")->capture_default_str();
    app.add_option("--levels", cfg.levels, "Number of eigenvalues or states")->capture_default_str();
    app.add_option("--l", l, "Angular index (family member of l-ladders)");
    app.add_option("--n", n, "Radial index (family member of the n-ladder)");
    app.add_option("--seed-kind", cfg.seed_kind, "Spherical Bessel seed kind: j | n")->capture_default_str();
    app.add_option("--format", cfg.format, "csv | json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output,-o", cfg.output, "Output file, - for stdout")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads for sweeps (0 = hardware)")->capture_default_str();
    app.add_option("--tol-quadrature", cfg.tolerances.quadrature, "Quadrature tolerance")->capture_default_str();
    app.add_option("--tol-eigenvalue", cfg.tolerances.eigenvalue, "Eigenvalue bisection width")->capture_default_str();
    app.add_flag("--schema", show_schema, "Print the output columns and exit");

    for (const auto& [name, help] : std::initializer_list<std::pair<const char*, const char*>>{
             {"deform", "Tabulate the Riccati solution and the deformed potential"},
             {"spectrum", "Lowest eigenvalues of the base and deformed operators"},
             {"verify", "Run the verification suite of a family"},
             {"scan-lambda", "Report singularities over a lambda sweep"},
             {"tabulate", "Tabulate deformed eigenfunctions"}})
        app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : isospec::cli::usage;
    }

    if (!app.get_subcommands().empty()) cfg.command = app.get_subcommands().front()->get_name();
    if (show_schema) {
        std::cout << isospec::cli::schema(cfg.command);
        return 0;
    }
    if (cfg.command.empty()) {
        std::cerr << app.help();
        return isospec::cli::usage;
    }
    try {
        if (!domain.empty()) cfg.domain = parse_domain(domain);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return isospec::cli::usage;
    }
    if (sweep_count > 0) cfg.sweep = isospec::cli::Sweep{sweep_start, sweep_stop, sweep_count};
    if (l >= 0) cfg.l = l;
    if (n >= 0) cfg.n = n;
    return isospec::cli::run(cfg);
}

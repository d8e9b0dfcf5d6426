#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isospec/catalog.hpp"
#include "isospec/eigensolver.hpp"
#include "isospec/errors.hpp"
#include "isospec/report.hpp"
#include "isospec/verify.hpp"

namespace isospec::cli {

enum ExitCode : int { ok = 0, usage = 1, validity = 2, numerical = 3, io = 4 };

struct Sweep {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    double at(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

struct RunConfig {
    std::string command;
    std::string model = "oscillator1d";
    std::string case_tag;
    double lambda = 2.0;
    std::optional<Sweep> sweep;
    std::optional<Interval> domain;
    int points = 2001;
    int levels = 6;
    std::optional<int> l;
    std::optional<int> n;
    std::string seed_kind = "j";
    std::string format = "csv";
    std::string output = "-";
    int threads = 0;
    Tolerances tolerances;
};

/// Rows of JSON scalars; CSV and JSON renderings are derived from it.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::ordered_json>> rows;
};

/// Shortest-free fixed rendering: 17 significant digits.
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

inline std::string render_cell(const nlohmann::ordered_json& v) {
    if (v.is_number_float()) return format_real(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return csv_field(v.get<std::string>());
    if (v.is_null()) return "";
    return csv_field(v.dump());
}

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
    out += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + render_cell(row[i]);
        out += "\r\n";
    }
    return out;
}

inline nlohmann::ordered_json real(double v) { return finite_or_null(v); }

inline nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json j;
    j["columns"] = t.columns;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    return j;
}

class IoError : public Error {
public:
    using Error::Error;
};

/// Writes text to path, or to out when path is "-" or empty.
inline void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("write to '" + path + "' failed");
}

inline std::string render(const Table& t, const std::string& format) {
    if (format == "json") return to_json(t).dump(2) + "\n";
    return to_csv(t);
}

inline void emit(const Table& t, const std::string& format, const std::string& path, std::ostream& out) {
    emit_text(render(t, format), path, out);
}

inline Table reports_table(const std::vector<VerificationReport>& reports) {
    Table t{{"check", "measurement", "value", "tolerance", "pass"}, {}};
    for (const auto& r : reports)
        for (const auto& m : r.measured)
            t.rows.push_back({r.check_id, m.name, real(m.value),
                              m.tolerance ? real(*m.tolerance) : nlohmann::ordered_json(nullptr), m.pass()});
    return t;
}

inline void emit(const std::vector<VerificationReport>& reports, const nlohmann::ordered_json& header,
                 const std::string& format, const std::string& path, std::ostream& out) {
    if (format == "json") {
        nlohmann::ordered_json j = header;
        bool pass = true;
        auto& checks = j["checks"] = nlohmann::ordered_json::array();
        for (const auto& r : reports) {
            checks.push_back(to_json(r));
            pass = pass && r.pass();
        }
        j["verdict"] = pass ? "pass" : "fail";
        emit_text(j.dump(2) + "\n", path, out);
    } else {
        emit(reports_table(reports), format, path, out);
    }
}

/// Column layout of every subcommand, printed by --schema.
inline std::string schema(const std::string& command) {
    const std::vector<std::pair<std::string, std::string>> s = {
        {"deform", "lambda?,x,nu,V_lambda  (lambda column only for sweeps; nu is the Riccati solution, "
                   "V_lambda the zeroth-order coefficient of the deformed operator)"},
        {"spectrum", "level,base,deformed,exact_base  (lowest eigenvalues by Sturm bisection; the deformed column "
                     "includes any bound state added by the deformation)"},
        {"verify", "check,measurement,value,tolerance,pass  (JSON: model, case, lambda, checks[], verdict)"},
        {"scan-lambda", "lambda,valid,singularities,locations  (locations separated by ';')"},
        {"tabulate", "x,psi_0,...,psi_{levels-1}  (deformed eigenfunctions)"},
    };
    std::string out;
    for (const auto& [cmd, cols] : s)
        if (command.empty() || command == cmd) out += cmd + ": " + cols + "\n";
    return out;
}

namespace detail {

inline CaseTag case_of(const RunConfig& c, ModelId m) {
    if (!c.case_tag.empty()) return parse_case(c.case_tag);
    if (m == ModelId::free3d || m == ModelId::isotropic_l) return CaseTag::I;
    return CaseTag::unique;
}

inline DeformedFamily family_for(const RunConfig& c, double lambda) {
    const ModelId m = parse_model(c.model);
    BesselKind kind = BesselKind::j;
    if (c.seed_kind == "n") kind = BesselKind::n;
    else if (c.seed_kind != "j") throw InvalidArgument("seed kind must be j or n");
    return build_family(m, case_of(c, m), lambda, c.domain, kind);
}

inline int member_index(const RunConfig& c, const DeformedFamily& f) {
    if (f.model == ModelId::isotropic_n) return c.n.value_or(0);
    return c.l.value_or(f.min_member);
}

inline std::vector<double> lambdas(const RunConfig& c) {
    std::vector<double> v;
    if (!c.sweep) return {c.lambda};
    if (c.sweep->count < 1) throw InvalidArgument("sweep count must be at least 1");
    for (int i = 0; i < c.sweep->count; ++i) v.push_back(c.sweep->at(i));
    return v;
}

/// Runs job(i) for i in [0, count) on worker threads; results land in their
/// own slot so the merge order never depends on completion order.
template <class R, class Job>
std::vector<R> parallel_map(int count, int threads, Job job) {
    std::vector<R> out(static_cast<std::size_t>(count));
    std::vector<std::exception_ptr> errors(out.size());
    int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::max(1, std::min(workers, count));
    auto work = [&](int w) {
        for (int i = w; i < count; i += workers) {
            try {
                out[static_cast<std::size_t>(i)] = job(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline Grid output_grid(const RunConfig& c, const DeformedFamily& f) {
    if (c.points < 3) throw InvalidArgument("--points must be at least 3");
    return make_uniform_grid(f.domain.lower, f.domain.upper, c.points);
}

inline Table deform(const RunConfig& c) {
    const auto ls = lambdas(c);
    const bool sweep = ls.size() > 1;
    auto rows = parallel_map<std::vector<std::vector<nlohmann::ordered_json>>>(
        static_cast<int>(ls.size()), c.threads, [&](int i) {
            const double lam = ls[static_cast<std::size_t>(i)];
            const DeformedFamily f = family_for(c, lam);
            const FamilyMember m = f.member(member_index(c, f));
            const Grid g = output_grid(c, f);
            std::vector<std::vector<nlohmann::ordered_json>> out;
            for (int k = 0; k < g.count(); ++k) {
                const Jet x(g[k]);
                std::vector<nlohmann::ordered_json> row;
                if (sweep) row.push_back(real(lam));
                row.push_back(real(g[k]));
                row.push_back(real(m.deformation.u(x).value()));
                row.push_back(real(m.deformed.R(x).value()));
                out.push_back(std::move(row));
            }
            return out;
        });
    Table t;
    if (sweep) t.columns.push_back("lambda");
    for (const char* col : {"x", "nu", "V_lambda"}) t.columns.push_back(col);
    for (auto& block : rows)
        for (auto& r : block) t.rows.push_back(std::move(r));
    return t;
}

inline Table spectrum(const RunConfig& c) {
    const DeformedFamily f = family_for(c, c.lambda);
    const int member = member_index(c, f);
    const FamilyMember m = f.member(member);
    if (f.model == ModelId::free1d || f.model == ModelId::free3d)
        throw UnsupportedError(to_string(f.model) + " has a continuous spectrum; the box spectrum depends on the "
                               "walls and is not a model eigenvalue list");
    const Grid g = f.radial ? make_uniform_grid(0.0, f.domain.upper, c.points) : output_grid(c, f);
    const SecondOrderOperator& deformed = m.deformed;
    const Spectrum base = eigen_lowest(discretize(m.base, g, BoundaryKind::dirichlet, c.tolerances), c.levels,
                                       c.tolerances.eigenvalue);
    const Spectrum def = eigen_lowest(discretize(deformed, g, BoundaryKind::dirichlet, c.tolerances), c.levels,
                                      c.tolerances.eigenvalue);
    Table t{{"level", "base", "deformed", "exact_base"}, {}};
    for (int i = 0; i < c.levels; ++i) {
        double exact = 0.0;
        if (f.model == ModelId::oscillator1d) exact = i + 0.5;
        else if (f.model == ModelId::isotropic_l) exact = radial_energy(i, member);
        else exact = NAN;
        t.rows.push_back({i, real(base.eigenvalues[static_cast<std::size_t>(i)]),
                          real(def.eigenvalues[static_cast<std::size_t>(i)]), real(exact)});
    }
    return t;
}

inline std::vector<VerificationReport> verify(const RunConfig& c, nlohmann::ordered_json& header) {
    const DeformedFamily f = family_for(c, c.lambda);
    header["model"] = to_string(f.model);
    header["case"] = to_string(f.case_tag);
    header["lambda"] = real(c.lambda);
    header["domain"] = {real(f.domain.lower), real(f.domain.upper)};
    header["points"] = c.points;
    header["levels"] = c.levels;
    const int member = member_index(c, f);
    header["member"] = member;
    return verify_family(f, c.levels, c.points, c.tolerances, member);
}

inline Table scan(const RunConfig& c) {
    const auto ls = lambdas(c);
    struct Row {
        double lambda;
        std::vector<double> points;
    };
    auto rows = parallel_map<Row>(static_cast<int>(ls.size()), c.threads, [&](int i) {
        const double lam = ls[static_cast<std::size_t>(i)];
        try {
            const DeformedFamily f = family_for(c, lam);
            f.member(member_index(c, f));
            return Row{lam, {}};
        } catch (const ValidityError& e) {
            return Row{lam, e.points()};
        }
    });
    Table t{{"lambda", "valid", "singularities", "locations"}, {}};
    for (const auto& r : rows) {
        std::string loc;
        for (std::size_t k = 0; k < r.points.size(); ++k) loc += (k ? ";" : "") + format_real(r.points[k]);
        t.rows.push_back({real(r.lambda), r.points.empty(), static_cast<int>(r.points.size()), loc});
    }
    return t;
}

inline Table tabulate(const RunConfig& c) {
    const DeformedFamily f = family_for(c, c.lambda);
    const Grid g = output_grid(c, f);
    const int member = member_index(c, f);
    std::vector<RealFn> states;
    for (int i = 0; i < c.levels; ++i) {
        StateLabel s;
        switch (f.model) {
            case ModelId::oscillator1d: s.n = i; break;
            case ModelId::free1d: s.k = 0.5 * (i + 1); break;
            case ModelId::free3d: s.l = member + i; break;
            case ModelId::isotropic_l: s.l = member; s.n = i; break;
            case ModelId::isotropic_n: s.n = member + i; break;
        }
        states.push_back(deformed_eigenfunction(f, s));
    }
    Table t;
    t.columns.push_back("x");
    for (int i = 0; i < c.levels; ++i) t.columns.push_back("psi_" + std::to_string(i));
    for (int k = 0; k < g.count(); ++k) {
        std::vector<nlohmann::ordered_json> row{real(g[k])};
        for (const auto& s : states) row.push_back(real(s(Jet(g[k])).value()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace detail

/// Executes one subcommand. Diagnostics go to err; data to the configured
/// output (out when the output path is "-").
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        if (c.format != "csv" && c.format != "json") throw InvalidArgument("format must be csv or json");
        if (c.levels < 1) throw InvalidArgument("--levels must be at least 1");
        if (c.command == "deform") {
            emit(detail::deform(c), c.format, c.output, out);
        } else if (c.command == "spectrum") {
            emit(detail::spectrum(c), c.format, c.output, out);
        } else if (c.command == "verify") {
            nlohmann::ordered_json header;
            const auto reports = detail::verify(c, header);
            emit(reports, header, c.format, c.output, out);
            bool pass = true;
            for (const auto& r : reports) pass = pass && r.pass();
            if (!pass) {
                err << "verification failed:";
                for (const auto& r : reports)
                    if (!r.pass()) err << " " << r.check_id;
                err << "\n";
                return numerical;
            }
        } else if (c.command == "scan-lambda") {
            emit(detail::scan(c), c.format, c.output, out);
        } else if (c.command == "tabulate") {
            emit(detail::tabulate(c), c.format, c.output, out);
        } else {
            throw InvalidArgument("unknown command '" + c.command + "'");
        }
        return ok;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return io;
    } catch (const SingularityError& e) {
        err << "error: " << e.what() << "\n";
        for (double p : e.points()) err << "singularity at x = " << format_real(p) << "\n";
        return validity;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return numerical;
    }
}

}  // namespace isospec::cli

#pragma once

// Command-line driver. Everything goes through run_cli so tests can call it
// in-process with string streams.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <iosfwd>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "optomech/config.hpp"

namespace om::cli {

enum ExitCode : int { ok = 0, anchor_failed = 1, validation = 2, numerical = 3 };

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;  // names carry their unit as a suffix
    std::vector<std::vector<Cell>> rows;
};

// CSV with a header row; numbers printed with 17 significant digits.
void write_csv(const Table& t, std::ostream& os);
// {"columns": [...], "rows": [[...], ...]}; non-finite numbers become null.
void write_json(const Table& t, std::ostream& os);

// Evaluates f(0..n-1) on up to hardware_concurrency threads. The results
// come back in index order; the first exception (lowest index) is rethrown.
template <class F>
auto parallel_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    auto work = [&](std::size_t w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Options that only make sense for one subcommand.
struct SubcommandOptions {
    bool single_sided = false;
    double s_omega_omega = 0.0;  // laser frequency noise [rad^2/s^2/Hz]
    double radius_um = 25.0;
    std::string material = "silica";
    double tls_f_hz = 40e6;
    double t_end = 0.0;          // timedomain run length [s], 0 picks 20 periods
    int samples = 2001;
    double kick_m = 0.0;
    double tol = 1e-9;
    std::string anchor = "all";
};

// Builds the table for cfg.subcommand; throws ValidationError/NumericalError.
// Sets anchors_ok to false when a reproduced anchor misses its tolerance.
Table run(const RunConfig& cfg, const SubcommandOptions& opts, bool* anchors_ok = nullptr);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace om::cli

// tasks.hpp: the computations behind each CLI subcommand, producing CSV tables
// in memory so that nothing touches the disk until a task has finished.

#pragma once

#include "rabi_floquet/config.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rabi_floquet {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int failed_rows{0};
};

struct OutputFile {
    std::string name;
    std::string content;
};

struct TaskOutput {
    std::vector<OutputFile> files;
    int failed_rows{0};
};

// %.17g; non-finite values print as nan / inf / -inf.
std::string format_number(double x);
std::string to_csv(const Table& t);

// Worker count: RABI_FLOQUET_THREADS when set to a positive integer, else the core count.
unsigned worker_count();

// Evaluates fn(0..n-1) on worker_count() threads; results keep index order.
std::vector<std::vector<std::vector<std::string>>> parallel_rows(
    std::size_t n, const std::function<std::vector<std::vector<std::string>>(std::size_t)>& fn);

// g,level_id,n,branch,parity,E_analytic,E_numeric for every g of the sweep (or the single
// configured g). Analytic levels are E0 and E_{n+-} with n <= n_cutoff - 2; each is paired
// with the nearest folded numeric quasi-energy.
Table spectrum_table(const RunConfig& c);

// t_over_T,W_analytic,W_exact,M_analytic,M_exact,G_analytic,G_exact.
Table dynamics_table(const RunConfig& c);

// nu,magnitude_analytic,magnitude_exact for the configured observable.
Table fourier_table(const RunConfig& c);

// <axis>,W0_analytic,W0_exact,M0_analytic,M0_exact,G0_analytic,G0_exact,status.
Table averages_table(const RunConfig& c);

// <axis>,gap_analytic,gap_numeric,relative_error,status.
Table gap_table(const RunConfig& c);

TaskOutput run_task(const RunConfig& c);

// Creates the directory and writes every file. Throws std::runtime_error on I/O failure.
void write_outputs(const TaskOutput& out, const std::string& dir);

}  // namespace rabi_floquet

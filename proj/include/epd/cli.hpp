#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "epd/data.hpp"
#include "epd/kernels.hpp"
#include "epd/quadrature.hpp"
#include "epd/solver.hpp"
#include "epd/verify.hpp"

namespace epd::cli {

enum ExitCode { kOk = 0, kDomainError = 1, kConvergenceError = 2, kVerificationFailed = 3 };

enum class Command { Eval, Kernel, Solve, Verify };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

// One run of the tool. `target` names the function (eval), kernel, problem
// (solve) or suite (verify).
struct RunConfig {
    Command command = Command::Eval;
    std::string target;
    kernels::EPDParameters params;
    std::map<std::string, double> args;  // eval arguments, and t/x/xp for kernels
    std::string f = "zero";
    std::string g = "zero";
    std::vector<double> a;  // series coefficients of f
    std::vector<double> b;  // series coefficients of g
    std::string grid;
    QuadratureSpec quad;
    int threads = 1;
    std::string output;  // empty: stdout
    std::string format = "csv";

    nlohmann::json to_json() const;
    // Unknown keys are rejected with the offending key in the message.
    static RunConfig from_json(const nlohmann::json& j);
    // Parse errors carry the line and column.
    static RunConfig parse(const std::string& text);

    // Field-wise, through the serialised form.
    bool operator==(const RunConfig& o) const { return to_json() == o.to_json(); }
};

// `poly:c0,c1,...`, `gauss:amp,center,width`, `bump:center,radius`, `zero`.
solver::DataFunction parse_data(const std::string& literal);
// `t=start:stop:step;x=start:stop:step`; a bare value is a single point.
solver::GridSpec parse_grid(const std::string& text);
std::vector<double> parse_list(const std::string& text);

std::string format_double(double v);  // 17 significant digits

// Header `t,x,value,phase_re,phase_im,est_error,method,region`, one row per sample.
std::string samples_to_csv(const std::vector<solver::SolutionSample>& samples);
nlohmann::json samples_to_json(const std::vector<solver::SolutionSample>& samples);

// Verification suites by name; "all" runs every suite.
std::vector<std::string> suite_names();
std::vector<verify::VerificationReport> run_suite(const std::string& name);

// Writes results to cfg.output (with a `.meta.json` sidecar) or to out.
// Errors go to err; the return value is an ExitCode.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Flag parsing, then run(). Logging level comes from EPD_LOG.
int main(int argc, char** argv);

}  // namespace epd::cli

// sgm: identify second-gradient stiffness tensors from grain-pair stiffnesses.

#include "sgm/app.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using sgm::app::Json;

// Reads the --config file; missing or malformed files are usage errors.
Json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw sgm::app::UsageError("cannot open config file " + path);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw sgm::app::UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Strain-gradient stiffness identification for granular media"};
    cli.set_version_flag("--version", "sgm 1.0.0");

    std::string command, config_path;
    cli.add_option("command", command, "identify | verify | convert | table | diff-legacy")
        ->check(CLI::IsMember(sgm::app::command_names()));
    cli.add_option("--config", config_path, "JSON file with the same keys as the long flags")
        ->check(CLI::ExistingFile);

    int dim = 0;
    double L = 0, keta = 0, ktau = 0, young = 0, nu = 0, tol = 0;
    std::string dist, out, format, mode;
    std::vector<std::string> dist_params;
    auto* o_dim = cli.add_option("--dim", dim, "spatial dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
    auto* o_L = cli.add_option("--L", L, "grain-pair distance");
    auto* o_keta = cli.add_option("--keta", keta, "integrated normal stiffness kbar_eta");
    auto* o_ktau = cli.add_option("--ktau", ktau, "integrated tangential stiffness kbar_tau");
    auto* o_young = cli.add_option("--young", young, "Young's modulus");
    auto* o_nu = cli.add_option("--nu", nu, "Poisson ratio");
    auto* o_dist = cli.add_option("--dist", dist, "built-in distribution: isotropic, biased-c1, fabric-c1sq");
    auto* o_dp = cli.add_option("--dist-param", dist_params, "distribution parameter key=value (repeatable)");
    auto* o_out = cli.add_option("--out", out, "output file (default: standard output)");
    auto* o_fmt = cli.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    auto* o_tol = cli.add_option("--tol", tol, "relative tolerance for checks");
    auto* o_mode = cli.add_option("--mode", mode, "kinematics: corrected or legacy")
                       ->check(CLI::IsMember({"corrected", "legacy"}));

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return sgm::app::kUsageError;
    }

    Json job = Json::object();
    try {
        if (!config_path.empty()) job = load_config(config_path);
        if (!job.is_object()) throw sgm::app::UsageError("config file must hold a JSON object");
    } catch (const sgm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sgm::app::kUsageError;
    }

    // flags override the file
    if (!command.empty()) job["command"] = command;
    if (*o_dim) job["dim"] = dim;
    if (*o_L) job["L"] = L;
    if (*o_keta) job["keta"] = keta;
    if (*o_ktau) job["ktau"] = ktau;
    if (*o_young) job["young"] = young;
    if (*o_nu) job["nu"] = nu;
    if (*o_dist) job["dist"] = dist;
    if (*o_dp) job["dist-param"] = dist_params;
    if (*o_out) job["out"] = out;
    if (*o_fmt) job["format"] = format;
    if (*o_tol) job["tol"] = tol;
    if (*o_mode) job["mode"] = mode;

    return sgm::app::run_json(job, std::cout, std::cerr);
}

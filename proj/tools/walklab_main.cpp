#include <iostream>

#include "CLI11.hpp"
#include "walklab/scenario.hpp"

namespace {

walklab::ScenarioConfig load(const std::string& path) {
    return walklab::ScenarioConfig::from_file(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"long-range random walk laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> report_paths;

    auto* gen = app.add_subcommand("gen", "generate a graph family instance");
    gen->add_option("config", config_path, "scenario config file")->required();
    auto* psi = app.add_subcommand("psi", "on-diagonal decay curve");
    psi->add_option("config", config_path, "scenario config file")->required();
    auto* verify = app.add_subcommand("verify", "run inequality checks");
    verify->add_option("config", config_path, "scenario config file")->required();
    auto* fit = app.add_subcommand("fit", "fit exponents from a decay curve");
    fit->add_option("config", config_path, "scenario config file")->required();
    auto* report = app.add_subcommand("report", "summarize verify outputs");
    report->add_option("json", report_paths, "verify JSON files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return walklab::cmd_gen(load(config_path), std::cout);
        if (psi->parsed()) return walklab::cmd_psi(load(config_path), std::cout);
        if (verify->parsed()) return walklab::cmd_verify(load(config_path), std::cout);
        if (fit->parsed()) return walklab::cmd_fit(load(config_path), std::cout);
        if (report->parsed()) return walklab::cmd_report(report_paths, std::cout);
    } catch (const walklab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

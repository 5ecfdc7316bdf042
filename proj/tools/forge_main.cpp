#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "forge/pipeline.hpp"

namespace {

int dispatch(const std::string& command, const std::string& config_path) {
    forge::RunConfig config;
    try {
        config = forge::RunConfig::from_file(config_path);
    } catch (const forge::Error& err) {
        std::cerr << err.what() << "\n";
        return forge::exit_codes::config_error;
    }

    forge::PipelineOutcome outcome;
    if (command == "run")
        outcome = forge::run_pipeline(config);
    else if (command == "sweep")
        outcome = forge::run_sweep(config);
    else
        outcome = forge::run_mesh(config);

    std::cout << outcome.report.dump(2) << "\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface-germ construction and hyperbolicity certification for closed curves"};
    app.require_subcommand(1);

    std::string config_path;
    auto add = [&](const char* name, const char* desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->add_option("--config", config_path, "JSON run configuration")->required();
        return cmd;
    };
    CLI::App* run = add("run", "certify a hyperbolic principal cycle and verify it");
    CLI::App* sweep = add("sweep", "emit the Lambda(theta0) sweep CSV");
    CLI::App* mesh = add("mesh", "export the strip mesh as OBJ");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return dispatch("run", config_path);
    if (sweep->parsed()) return dispatch("sweep", config_path);
    if (mesh->parsed()) return dispatch("mesh", config_path);
    return forge::exit_codes::config_error;
}

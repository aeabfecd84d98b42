// xsalpha: excess-return timing backtests from the command line.
//
//   xsalpha run   --config <path> [--config <path> ...] [--out-dir <dir>]
//   xsalpha synth --config <path> [--out-dir <dir>]
//
// Exit status: 0 on success, 1 on data or optimizer errors, 2 on usage or
// configuration errors. XSALPHA_THREADS caps parallelism.

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <xsalpha/errors.hpp>
#include <xsalpha/run.hpp>

namespace fs = std::filesystem;

namespace {

unsigned thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("XSALPHA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) cap = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring XSALPHA_THREADS='" << env << "'\n";
        }
    }
    return cap;
}

std::vector<xsalpha::RunConfig> load_configs(const std::vector<std::string>& paths, const std::string& out_dir) {
    std::vector<xsalpha::RunConfig> configs;
    for (const auto& p : paths) {
        auto c = xsalpha::load_run_config(p);
        if (!out_dir.empty()) {
            // Several configs sharing one output directory get a subdirectory each.
            c.out_dir = paths.size() == 1 ? fs::path(out_dir) : fs::path(out_dir) / fs::path(p).stem();
        }
        configs.push_back(std::move(c));
    }
    return configs;
}

int run_all(const std::vector<xsalpha::RunConfig>& configs) {
    const unsigned cap = thread_cap();
    const unsigned outer = std::min<unsigned>(cap, static_cast<unsigned>(configs.size()));
    const unsigned inner = std::max(1u, cap / std::max(1u, outer));
    std::vector<int> status(configs.size(), 0);
    std::mutex log;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                xsalpha::run(configs[i], inner);
                std::lock_guard lock(log);
                std::cout << configs[i].name << ": wrote " << configs[i].report_file().string() << " and "
                          << configs[i].series_file().string() << '\n';
            } catch (const xsalpha::ConfigError& e) {
                std::lock_guard lock(log);
                std::cerr << configs[i].name << ": configuration error: " << e.what() << '\n';
                status[i] = 2;
            } catch (const std::exception& e) {
                std::lock_guard lock(log);
                std::cerr << configs[i].name << ": error: " << e.what() << '\n';
                status[i] = 1;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < outer; ++t) pool.emplace_back(worker);
        worker();
    }
    return *std::max_element(status.begin(), status.end());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Excess-return timing backtests"};
    app.require_subcommand(1);

    std::vector<std::string> run_configs;
    std::string out_dir;
    auto* run_cmd = app.add_subcommand("run", "Run the timing strategy and the static mean-weight comparison");
    run_cmd->add_option("--config", run_configs, "Config file(s)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out-dir", out_dir, "Override the output directory");

    std::string synth_config;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic panel and save it");
    synth_cmd->add_option("--config", synth_config, "Config file")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("--out-dir", out_dir, "Override the output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) return run_all(load_configs(run_configs, out_dir));
        const auto configs = load_configs({synth_config}, out_dir);
        const auto path = xsalpha::run_synth(configs[0]);
        std::cout << "wrote " << path.string() << '\n';
        return 0;
    } catch (const xsalpha::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

// Batch experiment front end. All work is described by a JSON config file;
// see README.md for the schemas.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "flpaa/json_io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"facility location with aleatory agents: solvers, mechanisms, bounds"};
    std::string config_path;
    std::string out_path;
    long seed = -1;
    std::string ell_list;
    app.add_option("--config", config_path, "path to a JSON experiment config")->required();
    app.add_option("--out", out_path, "artifact output path (overrides the config)");
    app.add_option("--seed", seed, "seed override for randomized commands");
    app.add_option("--ell", ell_list, "comma-separated concentration schedule override");
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "error [2]: cannot open config " << config_path << "\n";
            return 2;
        }
        flpaa::json config = flpaa::json::parse(f, nullptr, true, true);
        if (seed >= 0) config["seed"] = seed;
        if (!ell_list.empty()) {
            std::vector<long> ells;
            std::size_t pos = 0;
            while (pos < ell_list.size()) {
                std::size_t comma = ell_list.find(',', pos);
                if (comma == std::string::npos) comma = ell_list.size();
                ells.push_back(std::stol(ell_list.substr(pos, comma - pos)));
                pos = comma + 1;
            }
            config["ells"] = ells;
        }
        if (out_path.empty() && config.contains("out")) out_path = config.at("out").get<std::string>();
        return flpaa::run_config(config, out_path, std::cout);
    } catch (const flpaa::Error& e) {
        std::cerr << "error [" << e.exit_code() << "]: " << e.what() << "\n";
        return e.exit_code();
    } catch (const flpaa::json::exception& e) {
        std::cerr << "error [2]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error [1]: " << e.what() << "\n";
        return 1;
    }
}

// Writes the 1994-2000 training fixture series and the SE1 reference model.

#include "sehurdle/cli.hpp"
#include "sehurdle/model_json.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Generate fixture data"};
    std::uint64_t seed = 1;
    std::string series_path = "data/fixture.csv";
    std::string model_path = "data/se1.json";
    app.add_option("--seed", seed, "Placement seed for the event days");
    app.add_option("--series", series_path, "Output series CSV");
    app.add_option("--model", model_path, "Output SE1 model JSON");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto series = sehurdle::training_fixture(seed);
        std::ostringstream csv;
        sehurdle::write_series_csv(csv, series, "format_version=1 seed=" + std::to_string(seed));
        sehurdle::cli::write_atomically(series_path, csv.str());

        auto model = sehurdle::se1_reference_model();
        model.count_spec = sehurdle::CountModelSpec{sehurdle::CountVariant::self_exciting};
        model.count = sehurdle::cse_reference_params();
        model.t_ref = series.length();
        sehurdle::cli::write_atomically(model_path, sehurdle::to_json(model).dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout << "wrote " << series_path << " and " << model_path << '\n';
    return 0;
}

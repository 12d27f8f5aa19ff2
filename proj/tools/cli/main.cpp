#include "commands.hpp"

#include <shapebp/error.hpp>

#include <iostream>

namespace {

int exit_code(shapebp::Errc code) {
  using shapebp::Errc;
  switch (code) {
    case Errc::io_error:
    case Errc::no_model_found:
    case Errc::insufficient_density:
    case Errc::insufficient_points:
    case Errc::no_valid_points:
    case Errc::too_few_points:
    case Errc::invalid_center_normal:
    case Errc::empty_input:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shape back-projection for unorganized point clouds"};
  app.require_subcommand(1);
  shapebp::cli::Common common;
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  app.add_option_function<std::uint64_t>(
      "--seed",
      [&common](std::uint64_t s) {
        common.seed = s;
        common.seed_given = true;
      },
      "Random seed");
  app.add_flag("--timings", common.timings, "Include wall times in metrics reports");

  const std::vector<shapebp::cli::Action> actions{
      shapebp::cli::add_synth(app, common),   shapebp::cli::add_histogram(app, common),
      shapebp::cli::add_backproject(app, common), shapebp::cli::add_classify(app, common),
      shapebp::cli::add_edges(app, common),   shapebp::cli::add_eval(app, common),
      shapebp::cli::add_bench(app, common),   shapebp::cli::add_ransac(app, common)};
  const auto subs = app.get_subcommands([](CLI::App*) { return true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) actions[i]();
    }
  } catch (const shapebp::Error& e) {
    std::cerr << "error [" << shapebp::to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

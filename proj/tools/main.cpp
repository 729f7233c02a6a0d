#include <iostream>

#include "command.hpp"

int main(int argc, char** argv) {
  using namespace uavtw;
  try {
    const cli::Command cmd = cli::parse_and_validate(argc, argv);
    return cli::run_command(cmd, std::cerr);
  } catch (const cli::HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return cli::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

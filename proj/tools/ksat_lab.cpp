#include "ksat/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

// placeholder main; subcommands land after the library settles
int main(int argc, char **argv)
{
	CLI::App app{"ksat-lab"};
	app.require_subcommand(0);
	CLI11_PARSE(app, argc, argv);
	std::cout << ksat::schema_header("noop").dump() << "\n";
	return 0;
}

#include <doctest.h>

// CLI smoke tests are added together with the subcommands.
TEST_CASE("placeholder") { CHECK(true); }

#pragma once

#include <optional>
#include <stdexcept>

namespace ksat {

// Leading closed forms of the k-SAT threshold bounds; o_k(1) correction
// terms are excluded throughout (the tables carry leading expressions only).

// 2^k ln2 - (1+ln2)/2
double bound_main(int k);

// 2^k ln2 - (k ln2)/2 - (1 + ln2/2)
double bound_lower_ap(int k);

// 2^k ln2 - (3/2) ln2
double bound_condensation(int k);

struct BoundTable {
	int k = 0;
	double main = 0;
	double kkks_upper = 0; // leading expression coincides with main
	double ap_lower = 0;
	double condensation = 0;
	double gap = 0; // main - ap_lower
	std::optional<int> regular_dstar;
};

BoundTable bound_table(int k);

} // namespace ksat

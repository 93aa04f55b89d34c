#include "ksat/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ksat {

int thread_budget()
{
	int hw = (int)std::thread::hardware_concurrency();
	if (hw < 1)
		hw = 1;
	if (const char *env = std::getenv("KSAT_LAB_THREADS"))
	{
		int cap = std::atoi(env);
		if (cap >= 1)
			hw = std::min(hw, cap);
	}
	return hw;
}

void parallel_chunks(int64_t n,
                     const std::function<void(int64_t, int64_t, int chunk)> &fn)
{
	if (n <= 0)
		return;
	int workers = (int)std::min<int64_t>(thread_budget(), n);
	if (workers <= 1)
	{
		fn(0, n, 0);
		return;
	}
	std::vector<std::thread> pool;
	pool.reserve(workers);
	int64_t per = (n + workers - 1) / workers;
	for (int w = 0; w < workers; ++w)
	{
		int64_t lo = w * per, hi = std::min<int64_t>(n, lo + per);
		if (lo >= hi)
			break;
		pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, w); });
	}
	for (auto &t : pool)
		t.join();
}

} // namespace ksat

#pragma once

#include <cstdint>
#include <vector>

namespace ksat {

// xoshiro256** 1.0 (Blackman/Vigna), seeded through splitmix64.
// The generator and every derived draw below are fully specified here, so a
// seed reproduces bit-identical streams on any platform and in any release.
class Rng {
  public:
	explicit Rng(uint64_t seed)
	{
		uint64_t x = seed;
		for (auto &w : s_)
			w = splitmix64(x);
	}

	uint64_t next()
	{
		uint64_t result = rotl(s_[1] * 5, 7) * 9;
		uint64_t t = s_[1] << 17;
		s_[2] ^= s_[0];
		s_[3] ^= s_[1];
		s_[1] ^= s_[2];
		s_[0] ^= s_[3];
		s_[2] ^= t;
		s_[3] = rotl(s_[3], 45);
		return result;
	}

	// unbiased draw from {0, ..., n-1} by rejection
	uint64_t below(uint64_t n)
	{
		uint64_t threshold = (0 - n) % n;
		for (;;)
		{
			uint64_t r = next();
			if (r >= threshold)
				return r % n;
		}
	}

	bool coin() { return next() >> 63; }

	// uniform in [0,1): 53 random mantissa bits
	double real() { return (next() >> 11) * 0x1.0p-53; }

	template <typename T> void shuffle(std::vector<T> &v)
	{
		for (size_t i = v.size(); i > 1; --i)
			std::swap(v[i - 1], v[below(i)]);
	}

	static uint64_t splitmix64(uint64_t &x)
	{
		uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
		return z ^ (z >> 31);
	}

  private:
	static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
	uint64_t s_[4];
};

} // namespace ksat

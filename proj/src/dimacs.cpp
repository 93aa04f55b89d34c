#include "ksat/formula.hpp"

#include <fstream>
#include <sstream>

namespace ksat {

Formula read_dimacs(const std::string &text)
{
	std::istringstream in(text);
	std::string line;
	Formula f;
	bool have_header = false;
	int64_t declared_clauses = 0;
	Clause cur;
	bool open_clause = false;

	while (std::getline(in, line))
	{
		if (line.empty())
			continue;
		if (line[0] == 'c' || line[0] == '%')
			continue;
		std::istringstream ls(line);
		if (line[0] == 'p')
		{
			std::string p, fmt;
			if (!(ls >> p >> fmt >> f.n_vars >> declared_clauses) || fmt != "cnf" ||
			    f.n_vars < 0 || declared_clauses < 0)
				throw ParseError("malformed DIMACS header: " + line);
			have_header = true;
			continue;
		}
		if (!have_header)
			throw ParseError("clause data before DIMACS header");
		int64_t x;
		while (ls >> x)
		{
			if (x == 0)
			{
				if (cur.empty())
					throw ParseError("empty clause in DIMACS input");
				f.clauses.push_back(cur);
				cur.clear();
				open_clause = false;
			}
			else
			{
				int64_t v = x < 0 ? -x : x;
				if (v > f.n_vars)
					throw ParseError("literal index out of range: " + std::to_string(x));
				cur.push_back(Lit::from_dimacs((int)x));
				open_clause = true;
			}
		}
		if (ls.fail() && !ls.eof())
			throw ParseError("bad token in DIMACS input: " + line);
	}
	if (!have_header)
		throw ParseError("missing DIMACS header");
	if (open_clause)
		throw ParseError("missing terminating 0 in last clause");
	for (auto &c : f.clauses)
		f.k = std::max(f.k, (int)c.size());
	return f;
}

std::string write_dimacs(const Formula &f)
{
	std::ostringstream out;
	out << "p cnf " << f.n_vars << ' ' << f.clauses.size() << '\n';
	for (auto &c : f.clauses)
	{
		for (auto l : c)
			out << l.to_dimacs() << ' ';
		out << "0\n";
	}
	return out.str();
}

Formula read_dimacs_file(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError("cannot open " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return read_dimacs(ss.str());
}

void write_dimacs_file(const Formula &f, const std::string &path)
{
	std::ofstream out(path);
	if (!out)
		throw ParseError("cannot open " + path + " for writing");
	out << write_dimacs(f);
}

} // namespace ksat

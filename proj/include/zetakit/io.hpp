#pragma once

#include <complex>
#include <string>
#include <vector>

namespace zk {

// 15 significant digits, the single numeric format used in every output file.
std::string num(double x);
std::string num(int x);

std::vector<std::string> split_csv_line(const std::string& line);
std::string trim(const std::string& s);

}  // namespace zk

#pragma once

#include <string>

#include "cde/model.hpp"

namespace fixtures {

inline cde::Instance four_client() { return cde::Instance(7, {{1, 3, 4, 6, 7}, {1, 2, 3, 5}, {1, 5, 6}, {3, 5, 6}}); }

inline cde::Instance eight_packet() { return cde::Instance(8, {{3, 4, 6, 7, 8}, {1, 4, 7, 8}, {3, 4, 5, 6, 7, 8}, {1, 2, 6}}); }

inline cde::Instance five_client() {
    return cde::Instance(10, {{5, 7, 10},
                              {1, 2, 5, 6, 7, 8, 9},
                              {1, 3, 5, 6, 7, 8, 9, 10},
                              {1, 3, 4, 5, 6, 7, 8, 9},
                              {3, 6, 8, 9}});
}

inline std::string data(const std::string& name) { return std::string(CDE_TEST_DATA) + "/" + name; }

inline cde::Coalition co(std::initializer_list<int> one_based) { return cde::Coalition::from_one_based(one_based); }

}  // namespace fixtures

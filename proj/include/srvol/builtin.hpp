#pragma once

#include <string>
#include <vector>

#include "srvol/model.hpp"

namespace srvol::builtin {

StructureModel grushin();
StructureModel heisenberg();
StructureModel martinet();
StructureModel almost_riemannian3();
StructureModel almost_riemannian4();
StructureModel r5_family(int k);
StructureModel ex_last();

// Names accepted by by_name: grushin, heisenberg, martinet, ar3, ar4, r5, exlast.
std::vector<std::string> names();
StructureModel by_name(const std::string& name, int k = 3);

// Helper for hand-written models: fields given as component strings over x1..xn.
StructureModel make_model(const std::string& name, std::size_t n, const std::vector<std::vector<std::string>>& fields,
                          const std::string& density = "1");
SubmanifoldChart make_stratum(const std::string& label, std::size_t n, int k, const std::vector<std::string>& map,
                              const std::vector<std::pair<std::string, std::string>>& domain);

}  // namespace srvol::builtin

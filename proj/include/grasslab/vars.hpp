#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace grasslab {

using VarId = std::uint32_t;

enum class Role { Jet, Deriv, Spectral, Aux };

// Process-wide interning. The id order is the term order used by every
// polynomial, so a fixed prefix of standard names is registered up front.
VarId intern(const std::string& name, Role role = Role::Aux);
std::optional<VarId> find_var(const std::string& name);
const std::string& var_name(VarId id);
Role var_role(VarId id);

class VarTable {
 public:
  VarTable() = default;
  VarTable(std::initializer_list<std::string> names);
  VarTable& add(const std::string& name, Role role = Role::Aux);
  VarTable& alias(const std::string& name, VarId id);
  std::optional<VarId> lookup(const std::string& name) const;
  const std::vector<VarId>& vars() const { return order_; }
  bool contains(VarId id) const;

 private:
  std::unordered_map<std::string, VarId> map_;
  std::vector<VarId> order_;
};

// a,b,p,q (first-order jets in x,y), u1..v3 chart coordinates, lam.
namespace V {
VarId a();
VarId b();
VarId p();
VarId q();
VarId lam();
VarId u(int i);  // i = 1..3
VarId v(int i);
}  // namespace V

// Spelling of a jet of u (func 0) or v (func 1): u_xxy, v_t, ... First-order
// x,y jets are spelled a,b,p,q.
std::string jet_spelling(int func, int i, int j, int k);

// Table with a,b,p,q (plus u_x,u_y,v_x,v_y aliases).
VarTable evol_table();
// Table with u1,u2,u3,v1,v2,v3.
VarTable chart_table();

}  // namespace grasslab

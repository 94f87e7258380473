#include "grasslab/vars.hpp"

#include <deque>
#include <mutex>
#include <stdexcept>

namespace grasslab {

std::string jet_spelling(int func, int i, int j, int k) {
  if (k == 0 && i + j == 1) {
    if (func == 0) return i ? "a" : "b";
    return i ? "p" : "q";
  }
  std::string s = func == 0 ? "u_" : "v_";
  s.append(i, 'x');
  s.append(j, 'y');
  s.append(k, 't');
  return s;
}

namespace {

struct Registry {
  std::mutex mu;
  std::deque<std::string> names;
  std::vector<Role> roles;
  std::unordered_map<std::string, VarId> index;

  VarId add_locked(const std::string& n, Role r) {
    auto it = index.find(n);
    if (it != index.end()) return it->second;
    VarId id = static_cast<VarId>(names.size());
    names.push_back(n);
    roles.push_back(r);
    index.emplace(n, id);
    return id;
  }

  Registry() {
    for (const char* n : {"a", "b", "p", "q"}) add_locked(n, Role::Jet);
    // xy-jets by order, then t-bearing jets, up to order 6
    for (int ord = 2; ord <= 6; ++ord)
      for (int func = 0; func < 2; ++func)
        for (int i = ord; i >= 0; --i) add_locked(jet_spelling(func, i, ord - i, 0), Role::Jet);
    for (int ord = 1; ord <= 6; ++ord)
      for (int func = 0; func < 2; ++func)
        for (int k = 1; k <= ord; ++k)
          for (int i = ord - k; i >= 0; --i)
            add_locked(jet_spelling(func, i, ord - k - i, k), Role::Jet);
    for (const char* n : {"u1", "v1", "u2", "v2", "u3", "v3"}) add_locked(n, Role::Jet);
    add_locked("lam", Role::Spectral);
    add_locked("s", Role::Aux);
  }
};

Registry& reg() {
  static Registry r;
  return r;
}

}  // namespace

VarId intern(const std::string& name, Role role) {
  auto& r = reg();
  std::lock_guard<std::mutex> lk(r.mu);
  return r.add_locked(name, role);
}

std::optional<VarId> find_var(const std::string& name) {
  auto& r = reg();
  std::lock_guard<std::mutex> lk(r.mu);
  auto it = r.index.find(name);
  if (it == r.index.end()) return std::nullopt;
  return it->second;
}

const std::string& var_name(VarId id) {
  auto& r = reg();
  std::lock_guard<std::mutex> lk(r.mu);
  if (id >= r.names.size()) throw std::out_of_range("unknown variable id");
  return r.names[id];
}

Role var_role(VarId id) {
  auto& r = reg();
  std::lock_guard<std::mutex> lk(r.mu);
  return r.roles.at(id);
}

VarTable::VarTable(std::initializer_list<std::string> names) {
  for (auto& n : names) add(n);
}

VarTable& VarTable::add(const std::string& name, Role role) {
  VarId id = intern(name, role);
  if (!map_.count(name)) {
    map_.emplace(name, id);
    order_.push_back(id);
  }
  return *this;
}

VarTable& VarTable::alias(const std::string& name, VarId id) {
  map_[name] = id;
  return *this;
}

std::optional<VarId> VarTable::lookup(const std::string& name) const {
  auto it = map_.find(name);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

bool VarTable::contains(VarId id) const {
  for (VarId v : order_)
    if (v == id) return true;
  return false;
}

namespace V {
VarId a() { static VarId x = intern("a"); return x; }
VarId b() { static VarId x = intern("b"); return x; }
VarId p() { static VarId x = intern("p"); return x; }
VarId q() { static VarId x = intern("q"); return x; }
VarId lam() { static VarId x = intern("lam"); return x; }
VarId u(int i) {
  static VarId x[3] = {intern("u1"), intern("u2"), intern("u3")};
  return x[i - 1];
}
VarId v(int i) {
  static VarId x[3] = {intern("v1"), intern("v2"), intern("v3")};
  return x[i - 1];
}
}  // namespace V

VarTable evol_table() {
  VarTable t{"a", "b", "p", "q"};
  t.alias("u_x", V::a()).alias("u_y", V::b()).alias("v_x", V::p()).alias("v_y", V::q());
  return t;
}

VarTable chart_table() { return VarTable{"u1", "u2", "u3", "v1", "v2", "v3"}; }

}  // namespace grasslab

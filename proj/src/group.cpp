#include "wreathlab/group.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <tuple>

#include <fmt/format.h>

#include "wreathlab/errors.hpp"
#include "wreathlab/magnus.hpp"

namespace wreathlab {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::IntVector: return "int_vector";
    case Family::Residue: return "residue";
    case Family::ReducedWord: return "reduced_word";
    case Family::Solvable: return "solvable";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// letters and words

int letter_index(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c >= 'A' && c <= 'Z') return c - 'A';
  return -1;
}

bool letter_is_inverse(char c) { return c >= 'A' && c <= 'Z'; }

char letter_for(int index, bool inverse) {
  return static_cast<char>((inverse ? 'A' : 'a') + index);
}

void validate_word(std::string_view letters, int rank) {
  for (char c : letters) {
    int i = letter_index(c);
    if (i < 0) throw ParseError(fmt::format("invalid character '{}' in word \"{}\"", c, letters));
    if (i >= rank)
      throw ParseError(fmt::format("letter '{}' exceeds rank {} in word \"{}\"", c, rank, letters));
  }
}

static bool cancels(char x, char y) { return x != y && letter_index(x) == letter_index(y); }

std::string free_reduce(std::string_view letters) {
  std::string out;
  out.reserve(letters.size());
  for (char c : letters) {
    if (!out.empty() && cancels(out.back(), c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string invert_word(std::string_view letters) {
  std::string out(letters.rbegin(), letters.rend());
  for (char& c : out) c = letter_for(letter_index(c), !letter_is_inverse(c));
  return out;
}

// ---------------------------------------------------------------------------
// BaseElement

BaseElement::BaseElement() : payload_(Residue{0, 1}) {}

BaseElement::BaseElement(ReducedWord w) : payload_(std::move(w)) {}

BaseElement::BaseElement(std::int64_t value, std::int64_t modulus) {
  if (modulus < 1) throw UsageError("residue modulus must be >= 1");
  std::int64_t r = value % modulus;
  if (r < 0) r += modulus;
  payload_ = Residue{r, modulus};
}

BaseElement::BaseElement(std::shared_ptr<const SolvableElement> s) : payload_(SolvableRef{std::move(s)}) {}

BaseElement BaseElement::word(std::string_view letters, int rank) {
  validate_word(letters, rank);
  return BaseElement(ReducedWord{free_reduce(letters), rank});
}

const IntVector& BaseElement::as_vector() const {
  if (auto p = std::get_if<IntVector>(&payload_)) return *p;
  throw UsageError("element is not an integer vector");
}
const Residue& BaseElement::as_residue() const {
  if (auto p = std::get_if<Residue>(&payload_)) return *p;
  throw UsageError("element is not a residue");
}
const ReducedWord& BaseElement::as_word() const {
  if (auto p = std::get_if<ReducedWord>(&payload_)) return *p;
  throw UsageError("element is not a free-group word");
}
const std::shared_ptr<const SolvableElement>& BaseElement::solvable_ptr() const {
  if (auto p = std::get_if<SolvableRef>(&payload_)) return p->ptr;
  throw UsageError("element is not a free solvable group element");
}
const SolvableElement& BaseElement::as_solvable() const { return *solvable_ptr(); }

bool BaseElement::is_identity() const {
  return std::visit(
      [](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IntVector>)
          return std::all_of(p.coords.begin(), p.coords.end(), [](std::int64_t x) { return x == 0; });
        else if constexpr (std::is_same_v<T, Residue>)
          return p.value == 0;
        else if constexpr (std::is_same_v<T, ReducedWord>)
          return p.letters.empty();
        else
          return p.ptr->flow().empty();
      },
      payload_);
}

static std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t BaseElement::hash() const {
  std::size_t h = payload_.index();
  std::visit(
      [&h](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IntVector>) {
          for (auto x : p.coords) h = mix(h, std::hash<std::int64_t>{}(x));
        } else if constexpr (std::is_same_v<T, Residue>) {
          h = mix(mix(h, std::hash<std::int64_t>{}(p.value)), std::hash<std::int64_t>{}(p.modulus));
        } else if constexpr (std::is_same_v<T, ReducedWord>) {
          h = mix(h, std::hash<std::string>{}(p.letters));
        } else {
          h = mix(h, p.ptr->hash());
        }
      },
      payload_);
  return h;
}

bool operator==(const BaseElement& a, const BaseElement& b) {
  if (a.payload_.index() != b.payload_.index()) return false;
  if (auto sa = std::get_if<SolvableRef>(&a.payload_)) {
    const auto& sb = std::get<SolvableRef>(b.payload_);
    if (sa->ptr == sb.ptr) return true;
    return sa->ptr->hash() == sb.ptr->hash() && *sa->ptr == *sb.ptr;
  }
  if (auto wa = std::get_if<ReducedWord>(&a.payload_)) return *wa == std::get<ReducedWord>(b.payload_);
  if (auto va = std::get_if<IntVector>(&a.payload_)) return *va == std::get<IntVector>(b.payload_);
  return std::get<Residue>(a.payload_) == std::get<Residue>(b.payload_);
}

std::strong_ordering operator<=>(const BaseElement& a, const BaseElement& b) {
  if (auto c = a.payload_.index() <=> b.payload_.index(); c != 0) return c;
  return std::visit(
      [&b](const auto& pa) -> std::strong_ordering {
        using T = std::decay_t<decltype(pa)>;
        const auto& pb = std::get<T>(b.payload_);
        if constexpr (std::is_same_v<T, IntVector>) {
          if (auto c = pa.coords.size() <=> pb.coords.size(); c != 0) return c;
          return pa.coords <=> pb.coords;
        } else if constexpr (std::is_same_v<T, Residue>) {
          return std::tie(pa.modulus, pa.value) <=> std::tie(pb.modulus, pb.value);
        } else if constexpr (std::is_same_v<T, ReducedWord>) {
          if (auto c = pa.rank <=> pb.rank; c != 0) return c;
          if (auto c = pa.letters.size() <=> pb.letters.size(); c != 0) return c;
          return pa.letters.compare(pb.letters) <=> 0;
        } else {
          if (pa.ptr == pb.ptr) return std::strong_ordering::equal;
          return *pa.ptr <=> *pb.ptr;
        }
      },
      a.payload_);
}

// ---------------------------------------------------------------------------
// group law

static void require_same_family(const BaseElement& g, const BaseElement& h) {
  if (g.family() != h.family())
    throw UsageError(fmt::format("family mismatch: {} vs {}", family_name(g.family()), family_name(h.family())));
}

BaseElement multiply(const BaseElement& g, const BaseElement& h) {
  require_same_family(g, h);
  switch (g.family()) {
    case Family::IntVector: {
      const auto& a = g.as_vector().coords;
      const auto& b = h.as_vector().coords;
      if (a.size() != b.size()) throw UsageError(fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
      std::vector<std::int64_t> c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) c[i] = checked::add(a[i], b[i]);
      return BaseElement::vec(std::move(c));
    }
    case Family::Residue: {
      const auto& a = g.as_residue();
      const auto& b = h.as_residue();
      if (a.modulus != b.modulus) throw UsageError(fmt::format("modulus mismatch: {} vs {}", a.modulus, b.modulus));
      // both values lie in [0, m) so the sum cannot overflow unless m > 2^62
      std::int64_t s = checked::add(a.value, b.value);
      if (s >= a.modulus) s -= a.modulus;
      return BaseElement(s, a.modulus);
    }
    case Family::ReducedWord: {
      const auto& a = g.as_word();
      const auto& b = h.as_word();
      if (a.rank != b.rank) throw UsageError(fmt::format("rank mismatch: F_{} vs F_{}", a.rank, b.rank));
      std::size_t k = 0;
      const std::size_t limit = std::min(a.letters.size(), b.letters.size());
      while (k < limit && cancels(a.letters[a.letters.size() - 1 - k], b.letters[k])) ++k;
      std::string out;
      out.reserve(a.letters.size() + b.letters.size() - 2 * k);
      out.append(a.letters, 0, a.letters.size() - k);
      out.append(b.letters, k, std::string::npos);
      return BaseElement(ReducedWord{std::move(out), a.rank});
    }
    case Family::Solvable:
      return solvable_multiply(g, h);
  }
  throw UsageError("unknown family");
}

BaseElement inverse(const BaseElement& g) {
  switch (g.family()) {
    case Family::IntVector: {
      auto c = g.as_vector().coords;
      for (auto& x : c) x = checked::neg(x);
      return BaseElement::vec(std::move(c));
    }
    case Family::Residue: {
      const auto& r = g.as_residue();
      return BaseElement(r.value == 0 ? 0 : r.modulus - r.value, r.modulus);
    }
    case Family::ReducedWord:
      return BaseElement(ReducedWord{invert_word(g.as_word().letters), g.as_word().rank});
    case Family::Solvable:
      return solvable_inverse(g);
  }
  throw UsageError("unknown family");
}

std::int64_t word_length(const BaseElement& g) {
  switch (g.family()) {
    case Family::IntVector: {
      std::int64_t s = 0;
      for (auto x : g.as_vector().coords) s = checked::add(s, x < 0 ? checked::neg(x) : x);
      return s;
    }
    case Family::Residue: {
      const auto& r = g.as_residue();
      return std::min(r.value, r.modulus - r.value);
    }
    case Family::ReducedWord:
      return static_cast<std::int64_t>(g.as_word().letters.size());
    case Family::Solvable:
      throw UnsupportedError("word length is not available for free solvable groups");
  }
  throw UsageError("unknown family");
}

bool ball_membership(const BaseElement& g, std::int64_t radius) { return word_length(g) <= radius; }

std::string to_text(const BaseElement& g) {
  switch (g.family()) {
    case Family::IntVector: return fmt::format("{}", fmt::join(g.as_vector().coords, ","));
    case Family::Residue: return fmt::format("{}", g.as_residue().value);
    case Family::ReducedWord: return g.as_word().letters.empty() ? std::string("e") : g.as_word().letters;
    case Family::Solvable: return g.as_solvable().to_text();
  }
  return "?";
}

// ---------------------------------------------------------------------------
// GroupHandle

struct GroupHandle::Impl {
  Family family;
  int rank = 1;
  std::int64_t modulus = 0;
  int level = 0;
  BaseElement identity;
  std::vector<BaseElement> gens;
  std::vector<BaseElement> gen_invs;
  std::vector<BaseElement> symmetric;
  std::shared_ptr<const Impl> quotient;  // S_{d,k-1} for solvable handles
};

void GroupHandle::fill_symmetric(Impl& impl) {
  for (std::size_t i = 0; i < impl.gens.size(); ++i) {
    for (const auto* g : {&impl.gens[i], &impl.gen_invs[i]}) {
      if (g->is_identity()) continue;
      if (std::find(impl.symmetric.begin(), impl.symmetric.end(), *g) == impl.symmetric.end())
        impl.symmetric.push_back(*g);
    }
  }
}

GroupHandle GroupHandle::integers(int d) {
  if (d < 1) throw UsageError("Z^d requires d >= 1");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::IntVector;
  impl->rank = d;
  impl->identity = BaseElement::vec(std::vector<std::int64_t>(d, 0));
  for (int i = 0; i < d; ++i) {
    std::vector<std::int64_t> e(d, 0);
    e[i] = 1;
    impl->gens.push_back(BaseElement::vec(e));
    e[i] = -1;
    impl->gen_invs.push_back(BaseElement::vec(e));
  }
  fill_symmetric(*impl);
  return GroupHandle(std::move(impl));
}

GroupHandle GroupHandle::cyclic(std::int64_t m) {
  if (m < 1) throw UsageError("Z/m requires m >= 1");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::Residue;
  impl->modulus = m;
  impl->identity = BaseElement(0, m);
  impl->gens.push_back(BaseElement(1, m));
  impl->gen_invs.push_back(BaseElement(-1, m));
  fill_symmetric(*impl);
  return GroupHandle(std::move(impl));
}

GroupHandle GroupHandle::free_group(int d) {
  if (d < 1 || d > 26) throw UsageError("F_d requires 1 <= d <= 26");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::ReducedWord;
  impl->rank = d;
  impl->identity = BaseElement(ReducedWord{"", d});
  for (int i = 0; i < d; ++i) {
    impl->gens.push_back(BaseElement(ReducedWord{std::string(1, letter_for(i, false)), d}));
    impl->gen_invs.push_back(BaseElement(ReducedWord{std::string(1, letter_for(i, true)), d}));
  }
  fill_symmetric(*impl);
  return GroupHandle(std::move(impl));
}

GroupHandle GroupHandle::free_solvable(int d, int k) {
  if (d < 1 || d > 26) throw UsageError("S_{d,k} requires 1 <= d <= 26");
  if (k < 1) throw UsageError("S_{d,k} requires k >= 1");
  if (k == 1) return integers(d);

  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const Impl>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({d, k}); it != cache.end()) return GroupHandle(it->second);
  }
  GroupHandle quotient = free_solvable(d, k - 1);
  auto impl = std::make_shared<Impl>();
  impl->family = Family::Solvable;
  impl->rank = d;
  impl->level = k;
  impl->quotient = quotient.impl_;
  impl->identity = SolvableElement::make(Flow(quotient), quotient.identity(), d, k);
  for (int i = 0; i < d; ++i) {
    const std::string x(1, letter_for(i, false));
    impl->gens.push_back(solvable_from_word(x, d, k));
    impl->gen_invs.push_back(inverse(impl->gens.back()));
  }
  fill_symmetric(*impl);

  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(std::pair{d, k}, std::move(impl));
  return GroupHandle(it->second);
}

Family GroupHandle::family() const { return impl_->family; }
int GroupHandle::rank() const { return impl_->rank; }
std::int64_t GroupHandle::modulus() const { return impl_->modulus; }
int GroupHandle::level() const { return impl_->level; }
bool GroupHandle::is_finite() const { return impl_->family == Family::Residue; }
bool GroupHandle::has_word_length() const { return impl_->family != Family::Solvable; }
const BaseElement& GroupHandle::identity() const { return impl_->identity; }

const BaseElement& GroupHandle::generator(int i) const {
  if (i < 0 || i >= static_cast<int>(impl_->gens.size()))
    throw UsageError(fmt::format("generator index {} out of range for {}", i, name()));
  return impl_->gens[i];
}

const BaseElement& GroupHandle::generator_inverse(int i) const {
  if (i < 0 || i >= static_cast<int>(impl_->gen_invs.size()))
    throw UsageError(fmt::format("generator index {} out of range for {}", i, name()));
  return impl_->gen_invs[i];
}

const std::vector<BaseElement>& GroupHandle::symmetric_generators() const { return impl_->symmetric; }

std::vector<BaseElement> GroupHandle::elements() const {
  if (!is_finite()) throw UnsupportedError(fmt::format("{} is infinite", name()));
  std::vector<BaseElement> out;
  for (std::int64_t v = 0; v < impl_->modulus; ++v) out.emplace_back(v, impl_->modulus);
  return out;
}

GroupHandle GroupHandle::solvable_quotient() const {
  if (impl_->family != Family::Solvable) throw UsageError(fmt::format("{} is not a free solvable group", name()));
  return GroupHandle(impl_->quotient);
}

bool GroupHandle::contains(const BaseElement& g) const {
  if (g.family() != impl_->family) return false;
  switch (impl_->family) {
    case Family::IntVector: return static_cast<int>(g.as_vector().coords.size()) == impl_->rank;
    case Family::Residue: return g.as_residue().modulus == impl_->modulus;
    case Family::ReducedWord: return g.as_word().rank == impl_->rank;
    case Family::Solvable: return g.as_solvable().rank() == impl_->rank && g.as_solvable().level() == impl_->level;
  }
  return false;
}

std::string GroupHandle::name() const {
  switch (impl_->family) {
    case Family::IntVector: return fmt::format("Z^{}", impl_->rank);
    case Family::Residue: return fmt::format("Z/{}", impl_->modulus);
    case Family::ReducedWord: return fmt::format("F_{}", impl_->rank);
    case Family::Solvable: return fmt::format("S_{{{},{}}}", impl_->rank, impl_->level);
  }
  return "?";
}

static std::int64_t parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(fmt::format("invalid integer \"{}\"", s));
  return v;
}

BaseElement GroupHandle::parse(std::string_view text) const {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  switch (impl_->family) {
    case Family::IntVector: {
      if (text.size() >= 2 && text.front() == '(' && text.back() == ')') text = text.substr(1, text.size() - 2);
      std::vector<std::int64_t> c;
      std::size_t pos = 0;
      while (true) {
        auto comma = text.find(',', pos);
        c.push_back(parse_int(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
      if (static_cast<int>(c.size()) != impl_->rank)
        throw ParseError(fmt::format("expected {} coordinates for {}, got \"{}\"", impl_->rank, name(), text));
      return BaseElement::vec(std::move(c));
    }
    case Family::Residue:
      return BaseElement(parse_int(text), impl_->modulus);
    case Family::ReducedWord:
      if (text == "e") return identity();
      return BaseElement::word(text, impl_->rank);
    case Family::Solvable:
      if (text == "e") return identity();
      return evaluate_word(text);
  }
  throw ParseError("unknown family");
}

BaseElement GroupHandle::evaluate_word(std::string_view letters) const {
  if (impl_->family == Family::Residue) {
    validate_word(letters, 1);
  } else {
    validate_word(letters, impl_->rank);
  }
  switch (impl_->family) {
    case Family::ReducedWord: return BaseElement(ReducedWord{free_reduce(letters), impl_->rank});
    case Family::Solvable: return solvable_from_word(letters, impl_->rank, impl_->level);
    default: break;
  }
  BaseElement acc = identity();
  for (char c : letters) {
    int i = letter_index(c);
    acc = multiply(acc, letter_is_inverse(c) ? generator_inverse(i) : generator(i));
  }
  return acc;
}

bool operator==(const GroupHandle& a, const GroupHandle& b) {
  if (a.impl_ == b.impl_) return true;
  return a.impl_->family == b.impl_->family && a.impl_->rank == b.impl_->rank &&
         a.impl_->modulus == b.impl_->modulus && a.impl_->level == b.impl_->level;
}

GroupHandle parse_group_spec(std::string_view spec) {
  std::string s;
  for (char c : spec)
    if (c != ' ' && c != '_' && c != '^' && c != '{' && c != '}') s.push_back(c);
  if (s == "Z") return GroupHandle::integers(1);
  if (s == "1") return GroupHandle::trivial();
  if (s.size() < 2) throw ParseError(fmt::format("invalid group spec \"{}\"", spec));
  const char head = s[0];
  std::string_view rest(s);
  rest.remove_prefix(1);
  try {
    if (head == 'Z' && rest.front() == '/') return GroupHandle::cyclic(parse_int(rest.substr(1)));
    if (head == 'Z') return GroupHandle::integers(static_cast<int>(parse_int(rest)));
    if (head == 'F') return GroupHandle::free_group(static_cast<int>(parse_int(rest)));
    if (head == 'S') {
      auto comma = rest.find(',');
      if (comma == std::string_view::npos) throw ParseError("S spec needs d,k");
      return GroupHandle::free_solvable(static_cast<int>(parse_int(rest.substr(0, comma))),
                                        static_cast<int>(parse_int(rest.substr(comma + 1))));
    }
  } catch (const UsageError& e) {
    throw ParseError(fmt::format("invalid group spec \"{}\": {}", spec, e.what()));
  }
  throw ParseError(fmt::format("invalid group spec \"{}\"", spec));
}

}  // namespace wreathlab

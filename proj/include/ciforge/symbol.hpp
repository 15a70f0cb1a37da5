#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ciforge {

/// Interned concept or role name. Comparison by id is cheap; ordering by
/// `str()` is stable across runs.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string_view name) : id_(table().intern(name)) {}

    std::uint32_t id() const noexcept { return id_; }
    const std::string& str() const { return table().name(id_); }

    friend bool operator==(Symbol a, Symbol b) noexcept { return a.id_ == b.id_; }
    friend bool operator!=(Symbol a, Symbol b) noexcept { return a.id_ != b.id_; }

    /// Id order; only meaningful within one process.
    friend bool operator<(Symbol a, Symbol b) noexcept { return a.id_ < b.id_; }

    /// Name order; use for anything that is written out.
    static int compare_names(Symbol a, Symbol b) {
        if (a == b)
            return 0;
        return a.str().compare(b.str());
    }

private:
    class Table {
    public:
        Table() { intern(""); }

        std::uint32_t intern(std::string_view name) {
            std::lock_guard lock(mutex_);
            auto it = ids_.find(std::string(name));
            if (it != ids_.end())
                return it->second;
            auto id = static_cast<std::uint32_t>(names_.size());
            names_.emplace_back(name);
            ids_.emplace(names_.back(), id);
            return id;
        }

        const std::string& name(std::uint32_t id) {
            std::lock_guard lock(mutex_);
            return names_[id];
        }

    private:
        std::mutex mutex_;
        std::deque<std::string> names_; // deque: references stay valid
        std::unordered_map<std::string, std::uint32_t> ids_;
    };

    static Table& table() {
        static Table t;
        return t;
    }

    std::uint32_t id_ = 0;
};

} // namespace ciforge

template <>
struct std::hash<ciforge::Symbol> {
    std::size_t operator()(ciforge::Symbol s) const noexcept { return s.id(); }
};

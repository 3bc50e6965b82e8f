#include "reebstrip/function.hpp"

#include "reebstrip/critical.hpp"

namespace reebstrip {

std::shared_ptr<const CriticalSet> TSFunction::critical_set(const Window& w,
                                                            const Tolerances& tol) const {
    const auto key = std::make_pair(w.lo, w.hi);
    {
        std::lock_guard<std::mutex> lock(cache_->m);
        auto it = cache_->by_window.find(key);
        if (it != cache_->by_window.end()) return it->second;
    }
    auto cs = std::make_shared<CriticalSet>(find_critical_set(*this, w, tol));
    std::lock_guard<std::mutex> lock(cache_->m);
    cache_->by_window.emplace(key, cs);
    return cs;
}

}  // namespace reebstrip

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace egomerge {

// Operations on sorted, duplicate-free ranges.

template <typename T>
inline std::size_t intersection_count(std::span<const T> a, std::span<const T> b) {
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

template <typename T>
inline std::vector<T> intersection(std::span<const T> a, std::span<const T> b) {
    std::vector<T> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

template <typename T>
inline std::vector<T> difference(std::span<const T> a, std::span<const T> b) {
    std::vector<T> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

template <typename T>
inline bool sorted_contains(std::span<const T> a, T value) {
    return std::binary_search(a.begin(), a.end(), value);
}

template <typename T>
inline bool intersects(std::span<const T> a, std::span<const T> b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

template <typename T>
inline void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace egomerge

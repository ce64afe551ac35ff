package cache;

import java.util.LinkedHashMap;
import java.util.Map;

/**
 * A least-recently-used cache.
 *
 * @param <K> key type
 * @param <V> value type
 */
public class LruCache<K, V> extends LinkedHashMap<K, V> {
    private static final long serialVersionUID = 1L;
    private final int capacity;

    public LruCache(int capacity) {
        super(16, 0.75f, true); // access order
        this.capacity = capacity;
    }

    @Override
    protected boolean removeEldestEntry(Map.Entry<K, V> eldest) {
        return size() > capacity;
    }

    /** Returns the value or computes it with {@code loader}. */
    public V getOrLoad(K key, java.util.function.Function<K, V> loader) {
        V v = get(key);
        if (v == null) {
            v = loader.apply(key);
            put(key, v);
        }
        return v;
    }
}

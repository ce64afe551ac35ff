package shop;

import java.util.HashMap;
import java.util.Map;

/**
 * Tracks stock levels per product code.
 */
public class Inventory {
    private final Map<String, Integer> stock = new HashMap<>();

    /** Adds {@code qty} units of {@code code}. */
    public void add(String code, int qty) {
        stock.merge(code, qty, Integer::sum);
    }

    /**
     * Removes units if enough are in stock.
     * @return whether the removal happened
     */
    public boolean remove(String code, int qty) {
        int have = stock.getOrDefault(code, 0);
        if (have < qty) {
            return false;
        }
        stock.put(code, have - qty);
        return true;
    }

    public int count(String code) {
        return stock.getOrDefault(code, 0);
    }
}

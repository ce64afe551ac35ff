package shop;

import static org.junit.jupiter.api.Assertions.assertThrows;

import org.junit.jupiter.api.Test;

class InventoryTest {
    @Test
    void rejectsNegativeRemoval() {
        Inventory inv = new Inventory();
        assertThrows(IllegalArgumentException.class, () -> inv.remove("apple", -1));
    }
}

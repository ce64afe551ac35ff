package bank;

import java.math.BigDecimal;
import java.util.Objects;

/**
 * A bank account holding a single balance.
 *
 * <p>Balances never go negative; see {@link #withdraw(BigDecimal)}.
 */
public class Account {
    private final String id; // immutable identifier
    private BigDecimal balance = BigDecimal.ZERO;

    /** Creates an empty account. */
    public Account(String id) {
        this.id = Objects.requireNonNull(id, "id");
    }

    /**
     * Adds money to the account.
     *
     * @param amount a positive amount
     */
    public void deposit(BigDecimal amount) {
        if (amount.signum() <= 0) {
            throw new IllegalArgumentException("amount must be positive");
        }
        balance = balance.add(amount); // no overflow with BigDecimal
    }

    public boolean withdraw(BigDecimal amount) {
        /* reject overdrafts */
        if (balance.compareTo(amount) < 0) {
            return false;
        }
        balance = balance.subtract(amount);
        return true;
    }

    public BigDecimal getBalance() {
        return balance;
    }

    @Override
    public String toString() {
        return "Account[" + id + "]"; // e.g. Account[42]
    }
}

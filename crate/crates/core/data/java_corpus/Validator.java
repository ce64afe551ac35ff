package forms;

import java.util.ArrayList;
import java.util.List;

/**
 * Validates user input fields.
 */
public class Validator {
    private final List<String> errors = new ArrayList<>();

    public Validator requireNonEmpty(String field, String value) {
        if (value == null || value.isBlank()) {
            errors.add(field + " is required");
        }
        return this;
    }

    public Validator requireEmail(String field, String value) {
        // Deliberately simple: something@something.tld
        if (value != null && !value.matches("[^@\\s]+@[^@\\s]+\\.[a-z]+")) {
            errors.add(field + " is not an e-mail address");
        }
        return this;
    }

    public List<String> errors() {
        return List.copyOf(errors);
    }
}

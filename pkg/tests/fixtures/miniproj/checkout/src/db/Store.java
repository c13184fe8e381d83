package app.db;

import java.sql.Connection;
import java.sql.ResultSet;

public class Store {
    private Connection connection;

    public ResultSet query(String sql) {
        return null;
    }
}
